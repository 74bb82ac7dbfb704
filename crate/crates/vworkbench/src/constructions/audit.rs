//! Seeded batch audit over the three headline constructions, with a
//! byte-reproducible report.
//!
//! Each trial derives its own stream from the master seed, so reports are
//! identical across runs and across thread counts; per-trial timings are
//! recorded for humans but excluded from the canonical bytes. Pass flags
//! are never trusted on load: every stored certificate re-validates, and
//! the cross-certificate conditions of the third bullet are recomputed
//! from the recorded witnesses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::constructions::conjugate::{
    commuting_conjugate, simultaneous_handle, CommutingCertificate, HandleCertificate,
};
use crate::constructions::decompose::{decompose_five, FiveFactorization};
use crate::constructions::family::big_f;
use crate::constructions::solve::{solve_big_f, SolveCertificate};
use crate::constructions::ConstructionError;
use crate::dyadic::{BinaryWord, CylinderSet, DyadicRational};
use crate::vcore::{random_element, random_reducible, random_reducible_fixing, VElement};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mixing constant for deriving per-trial seeds from the master seed.
const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Solves per trial in the third bullet.
const SOLVES_PER_TRIAL: usize = 3;

/// One audited trial: a five-factor decomposition, a commuting
/// conjugation on a planted pair, and a simultaneous handle whose pocket
/// absorbs three solved conjugates.
#[derive(Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub factorization: FiveFactorization,
    pub commuting: CommutingCertificate,
    pub handle: HandleCertificate,
    pub solves: Vec<SolveCertificate>,
    pub passed: bool,
}

/// The conjugated solve output must mesh with the handle exactly: it
/// lands in the pocket I, so composing it with h still fixes J, and with
/// h and either input still fixes A or B, all reducibly.
fn solve_meshes_with_handle(handle: &HandleCertificate, cert: &SolveCertificate) -> bool {
    let inner = || -> Result<bool, ConstructionError> {
        if cert.interval != handle.i {
            return Ok(false);
        }
        let moved = cert
            .conjugator
            .compose(&cert.input)?
            .compose(&cert.conjugator.inverse())?;
        let fixes = |g: &VElement, word: &BinaryWord| {
            g.is_reducible()
                && g.support()
                    .is_disjoint_from(&CylinderSet::from_words([*word]))
        };
        let with_h = moved.compose(&handle.h)?;
        Ok(fixes(&with_h, &handle.j)
            && fixes(&with_h.compose(&handle.g1)?, &handle.a)
            && fixes(&with_h.compose(&handle.g2)?, &handle.b))
    };
    inner().unwrap_or(false)
}

impl TrialRecord {
    /// Recomputes the pass verdict from the stored witnesses alone.
    pub fn recheck(&self) -> bool {
        self.factorization.validate().is_ok()
            && self.commuting.validate().is_ok()
            && self.handle.validate().is_ok()
            && self.solves.len() == SOLVES_PER_TRIAL
            && self
                .solves
                .iter()
                .all(|c| c.validate().is_ok() && solve_meshes_with_handle(&self.handle, c))
    }
}

/// Batch audit report. `canonical_bytes` is stable for a given seed and
/// trial count; `trial_ms` is informational only.
#[derive(Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema: String,
    pub version: String,
    pub seed: u64,
    pub trials: u32,
    #[serde(rename = "N")]
    pub n_value: u32,
    pub records: Vec<TrialRecord>,
    pub passed: bool,
    pub trial_ms: Option<Vec<u64>>,
}

pub const AUDIT_SCHEMA: &str = "vworkbench.audit/1";

impl AuditReport {
    /// Serialization with the timing channel blanked; equal bytes mean
    /// equal audit content.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut stripped = self.clone();
        stripped.trial_ms = None;
        serde_json::to_vec(&stripped).expect("report serializes")
    }

    /// Re-derives every pass flag from the stored witnesses and checks
    /// the summary fields agree with them.
    pub fn recheck_flags(&self) -> bool {
        self.schema == AUDIT_SCHEMA
            && self.n_value as usize == FiveFactorization::FACTOR_COUNT
            && self.records.len() == self.trials as usize
            && self.records.iter().all(|r| r.recheck() == r.passed)
            && self.passed == self.records.iter().all(|r| r.passed)
    }

    /// Full replay: reruns the audit from the stored seed and demands
    /// byte-identical canonical content.
    pub fn revalidate(&self) -> Result<(), ConstructionError> {
        let fresh = criterion_audit(self.seed, self.trials)?;
        if fresh.canonical_bytes() != self.canonical_bytes() {
            return Err(ConstructionError::CertificateInvalid {
                reason: "replay from seed produced different canonical bytes".into(),
            });
        }
        Ok(())
    }

    /// Loads a report from JSON, recomputing all pass flags from the
    /// recorded witnesses and refusing reports whose flags disagree.
    pub fn from_json(bytes: &[u8]) -> Result<Self, ConstructionError> {
        let report: AuditReport = serde_json::from_slice(bytes).map_err(|e| {
            ConstructionError::CertificateInvalid {
                reason: format!("malformed audit report: {e}"),
            }
        })?;
        if !report.recheck_flags() {
            return Err(ConstructionError::CertificateInvalid {
                reason: "stored pass flags disagree with recorded witnesses".into(),
            });
        }
        Ok(report)
    }
}

fn random_depth3_word<R: Rng>(rng: &mut R) -> BinaryWord {
    let mut word = BinaryWord::root();
    for _ in 0..3 {
        word = word.push(rng.gen()).expect("depth 3 fits");
    }
    word
}

fn run_trial(seed: u64) -> Result<TrialRecord, ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let g = random_element(&mut rng, 40);
    let factorization = decompose_five(&g)?;
    let first = factorization.validate().is_ok();

    let shared = random_depth3_word(&mut rng);
    let a = random_reducible_fixing(&mut rng, &shared, 14);
    let b = random_reducible_fixing(&mut rng, &shared, 14);
    let commuting = commuting_conjugate(&a, &b)?;
    let second = commuting.validate().is_ok();

    let g1 = random_element(&mut rng, 10);
    let g2 = random_element(&mut rng, 10);
    let handle = simultaneous_handle(&g1, &g2)?;
    let mut third = handle.validate().is_ok();
    let family = big_f(&handle.i, &DyadicRational::new(1, 3))?;
    let mut solves = Vec::with_capacity(SOLVES_PER_TRIAL);
    for _ in 0..SOLVES_PER_TRIAL {
        let k = random_reducible(&mut rng, 10);
        let cert = solve_big_f(&family, &k)?;
        third = third && solve_meshes_with_handle(&handle, &cert);
        solves.push(cert);
    }

    Ok(TrialRecord {
        seed,
        factorization,
        commuting,
        handle,
        solves,
        passed: first && second && third,
    })
}

/// Runs `trials` independent audited trials in parallel and assembles the
/// report. A construction error aborts the whole audit: the audit's job
/// is to certify outputs, and an input it cannot process at all is a
/// workbench defect, not a failed trial.
pub fn criterion_audit(seed: u64, trials: u32) -> Result<AuditReport, ConstructionError> {
    let timed: Vec<(TrialRecord, u64)> = (0..trials as u64)
        .into_par_iter()
        .map(|idx| {
            let start = Instant::now();
            let record = run_trial(seed ^ SEED_MIX.wrapping_mul(idx + 1))?;
            Ok((record, start.elapsed().as_millis() as u64))
        })
        .collect::<Result<_, ConstructionError>>()?;
    let (records, millis): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    let passed = records.iter().all(|r: &TrialRecord| r.passed);
    Ok(AuditReport {
        schema: AUDIT_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        trials,
        n_value: FiveFactorization::FACTOR_COUNT as u32,
        records,
        passed,
        trial_ms: Some(millis),
    })
}
