//! Sommelier rule system: seven elimination constraints, six pairing
//! decision rules, and the four-step pairing procedure.
//!
//! A (food, wine) pair must survive every elimination rule and fire at
//! least one pairing rule. Survivors are ranked by aroma similarity.
//!
//! Elimination (a fired rule rejects the pair):
//!
//! | rule         | fires when                                            |
//! |--------------|-------------------------------------------------------|
//! | weight       | wine.weight < food.weight                             |
//! | acidity      | wine.acid < food.acid                                 |
//! | sweetness    | wine.sweet < food.sweet                               |
//! | bitterness   | wine.bitter > tau_b and food.bitter > tau_b           |
//! | bitter-salt  | bitter/salt clash in either direction above tau_b     |
//! | acid-bitter  | acid/bitter clash in either direction above tau_b     |
//! | acid-piquant | acid/piquant clash in either direction above tau_b    |
//!
//! Pairing (any fired rule qualifies the pair), all clauses strict `>`
//! against tau_high:
//!
//! | rule    | food side | qualifying wine sides                  |
//! |---------|-----------|----------------------------------------|
//! | sweet   | sweet     | bitter, fat, piquant, salt, acid       |
//! | acid    | acid      | sweet, fat, salt                       |
//! | salt    | salt      | bitter, sweet, fat, piquant, acid      |
//! | piquant | piquant   | sweet, fat                             |
//! | fat     | fat       | bitter, sweet, piquant, acid           |
//! | bitter  | bitter    | sweet, fat                             |

use crate::embed::cosine;
use crate::error::{Error, Result};
use crate::profile::{CoreTaste, TasteProfile};

/// Constraint rules, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EliminationRule {
    Weight,
    Acidity,
    Sweetness,
    Bitterness,
    BitterSalt,
    AcidBitter,
    AcidPiquant,
}

impl EliminationRule {
    pub const ALL: [EliminationRule; 7] = [
        EliminationRule::Weight,
        EliminationRule::Acidity,
        EliminationRule::Sweetness,
        EliminationRule::Bitterness,
        EliminationRule::BitterSalt,
        EliminationRule::AcidBitter,
        EliminationRule::AcidPiquant,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EliminationRule::Weight => "weight",
            EliminationRule::Acidity => "acidity",
            EliminationRule::Sweetness => "sweetness",
            EliminationRule::Bitterness => "bitterness",
            EliminationRule::BitterSalt => "bitter-salt",
            EliminationRule::AcidBitter => "acid-bitter",
            EliminationRule::AcidPiquant => "acid-piquant",
        }
    }

    fn fires(&self, food: &TasteProfile, wine: &TasteProfile, tau_b: f64) -> bool {
        use CoreTaste::*;
        let f = |t: CoreTaste| food.scalar(t);
        let w = |t: CoreTaste| wine.scalar(t);
        match self {
            // Wine must have at least the same body / acidity / sweetness
            // as the food; equality passes.
            EliminationRule::Weight => w(Weight) < f(Weight),
            EliminationRule::Acidity => w(Acid) < f(Acid),
            EliminationRule::Sweetness => w(Sweet) < f(Sweet),
            EliminationRule::Bitterness => w(Bitter) > tau_b && f(Bitter) > tau_b,
            EliminationRule::BitterSalt => {
                (w(Bitter) > tau_b && f(Salt) > tau_b) || (w(Salt) > tau_b && f(Bitter) > tau_b)
            }
            EliminationRule::AcidBitter => {
                (w(Acid) > tau_b && f(Bitter) > tau_b) || (w(Bitter) > tau_b && f(Acid) > tau_b)
            }
            EliminationRule::AcidPiquant => {
                (w(Acid) > tau_b && f(Piquant) > tau_b) || (w(Piquant) > tau_b && f(Acid) > tau_b)
            }
        }
    }
}

impl std::fmt::Display for EliminationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Congruent/contrasting decision rules, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairingRule {
    Sweet,
    Acid,
    Salt,
    Piquant,
    Fat,
    Bitter,
}

impl PairingRule {
    pub const ALL: [PairingRule; 6] = [
        PairingRule::Sweet,
        PairingRule::Acid,
        PairingRule::Salt,
        PairingRule::Piquant,
        PairingRule::Fat,
        PairingRule::Bitter,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PairingRule::Sweet => "sweet pairing",
            PairingRule::Acid => "acid pairing",
            PairingRule::Salt => "salt pairing",
            PairingRule::Piquant => "piquant pairing",
            PairingRule::Fat => "fat pairing",
            PairingRule::Bitter => "bitter pairing",
        }
    }

    fn fires(&self, food: &TasteProfile, wine: &TasteProfile, tau: f64) -> bool {
        use CoreTaste::*;
        let f = |t: CoreTaste| food.scalar(t) > tau;
        let w = |t: CoreTaste| wine.scalar(t) > tau;
        match self {
            PairingRule::Sweet => {
                f(Sweet) && (w(Bitter) || w(Fat) || w(Piquant) || w(Salt) || w(Acid))
            }
            PairingRule::Acid => f(Acid) && (w(Sweet) || w(Fat) || w(Salt)),
            PairingRule::Salt => {
                f(Salt) && (w(Bitter) || w(Sweet) || w(Fat) || w(Piquant) || w(Acid))
            }
            PairingRule::Piquant => f(Piquant) && (w(Sweet) || w(Fat)),
            PairingRule::Fat => f(Fat) && (w(Bitter) || w(Sweet) || w(Piquant) || w(Acid)),
            PairingRule::Bitter => f(Bitter) && (w(Sweet) || w(Fat)),
        }
    }
}

impl std::fmt::Display for PairingRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule thresholds and evaluation order.
#[derive(Debug, Clone)]
pub struct RuleSet {
    /// Threshold for every "highly" clause of the pairing rules.
    pub tau_high: f64,
    /// Threshold for the mutual-clash elimination rules.
    pub tau_bitter: f64,
    elimination: Vec<EliminationRule>,
    pairing: Vec<PairingRule>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            tau_high: 0.75,
            tau_bitter: 0.75,
            elimination: EliminationRule::ALL.to_vec(),
            pairing: PairingRule::ALL.to_vec(),
        }
    }
}

impl RuleSet {
    pub fn with_thresholds(tau_high: f64, tau_bitter: f64) -> Result<RuleSet> {
        if !(0.0..1.0).contains(&tau_high) || tau_high <= 0.0 {
            return Err(Error::config("tau_high must be in (0, 1)"));
        }
        if !(0.0..1.0).contains(&tau_bitter) || tau_bitter <= 0.0 {
            return Err(Error::config("tau_bitter must be in (0, 1)"));
        }
        Ok(RuleSet {
            tau_high,
            tau_bitter,
            ..RuleSet::default()
        })
    }

    pub fn elimination_rules(&self) -> &[EliminationRule] {
        &self.elimination
    }

    pub fn pairing_rules(&self) -> &[PairingRule] {
        &self.pairing
    }
}

/// Outcome of evaluating one (food, wine) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingStatus {
    Eliminated,
    Paired,
    NoRuleFired,
}

impl PairingStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairingStatus::Eliminated => "eliminated",
            PairingStatus::Paired => "paired",
            PairingStatus::NoRuleFired => "no_rule_fired",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairingVerdict {
    pub status: PairingStatus,
    pub fired_elimination: Vec<EliminationRule>,
    pub fired_pairing: Vec<PairingRule>,
    /// Cosine of the two aroma vectors; absent for eliminated pairs or
    /// when either vector carries the empty flag.
    pub aroma_similarity: Option<f64>,
}

/// Whether a surviving pair is congruent (food and wine share their
/// dominant taste) or contrasting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingStyle {
    Congruent,
    Contrasting,
}

pub fn pairing_style(food: &TasteProfile, wine: &TasteProfile) -> PairingStyle {
    if food.dominant_taste() == wine.dominant_taste() {
        PairingStyle::Congruent
    } else {
        PairingStyle::Contrasting
    }
}

/// Evaluate all elimination rules in order. Returns whether the pair is
/// rejected and every rule that fired.
pub fn eliminate(
    food: &TasteProfile,
    wine: &TasteProfile,
    rules: &RuleSet,
) -> (bool, Vec<EliminationRule>) {
    let fired: Vec<EliminationRule> = rules
        .elimination
        .iter()
        .filter(|r| r.fires(food, wine, rules.tau_bitter))
        .copied()
        .collect();
    (!fired.is_empty(), fired)
}

/// Evaluate all pairing rules independently; call only on pairs that
/// survived elimination.
pub fn classify_pairing(
    food: &TasteProfile,
    wine: &TasteProfile,
    rules: &RuleSet,
) -> Vec<PairingRule> {
    rules
        .pairing
        .iter()
        .filter(|r| r.fires(food, wine, rules.tau_high))
        .copied()
        .collect()
}

/// Full verdict for one pair: elimination, then decision rules, then
/// aroma similarity.
pub fn evaluate_pair(food: &TasteProfile, wine: &TasteProfile, rules: &RuleSet) -> PairingVerdict {
    let (rejected, fired_elimination) = eliminate(food, wine, rules);
    if rejected {
        return PairingVerdict {
            status: PairingStatus::Eliminated,
            fired_elimination,
            fired_pairing: Vec::new(),
            aroma_similarity: None,
        };
    }
    let fired_pairing = classify_pairing(food, wine, rules);
    let aroma_similarity = match (&food.aroma_vec, &wine.aroma_vec) {
        (Some(f), Some(w)) => cosine(f, w).ok(),
        _ => None,
    };
    PairingVerdict {
        status: if fired_pairing.is_empty() {
            PairingStatus::NoRuleFired
        } else {
            PairingStatus::Paired
        },
        fired_elimination,
        fired_pairing,
        aroma_similarity,
    }
}

/// A wine that paired with a food, with its verdict.
#[derive(Debug, Clone)]
pub struct RankedWine {
    pub wine_id: String,
    pub similarity: f64,
    pub verdict: PairingVerdict,
}

/// The pairing procedure: drop eliminated wines, keep wines firing at
/// least one decision rule, sort by descending aroma similarity with
/// ascending `item_id` tie-break, return the top `k`.
///
/// Wines whose aroma vector carries the empty flag cannot be ranked and
/// are skipped.
pub fn pair(
    food: &TasteProfile,
    wines: &[TasteProfile],
    rules: &RuleSet,
    k: usize,
) -> Result<Vec<RankedWine>> {
    if k < 1 {
        return Err(Error::config("k must be >= 1"));
    }
    let food_vec = food
        .aroma_vec
        .as_deref()
        .ok_or_else(|| Error::data(format!("food `{}` has an empty aroma vector", food.item_id)))?;

    let mut survivors: Vec<RankedWine> = wines
        .iter()
        .filter_map(|wine| {
            let wine_vec = wine.aroma_vec.as_deref()?;
            let verdict = evaluate_pair(food, wine, rules);
            if verdict.status != PairingStatus::Paired {
                return None;
            }
            let similarity = cosine(food_vec, wine_vec).ok()?;
            Some(RankedWine {
                wine_id: wine.item_id.clone(),
                similarity,
                verdict: PairingVerdict {
                    aroma_similarity: Some(similarity),
                    ..verdict
                },
            })
        })
        .collect();

    survivors.sort_by(|a, b| {
        b.similarity
            .partial_cmp(&a.similarity)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.wine_id.cmp(&b.wine_id))
    });
    survivors.truncate(k);
    Ok(survivors)
}
