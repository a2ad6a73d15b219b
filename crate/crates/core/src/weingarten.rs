//! Symmetric speed functions of the principal curvatures.
//!
//! Curvature vectors are stored multiplicity-compressed: isoparametric
//! hypersurfaces have at most a handful of distinct principal curvatures,
//! each repeated many times. Elementary symmetric functions are computed from
//! the truncated product `Π (1 + k_i x)^{m_i}`, never by enumerating subsets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Principal curvatures as `(value, multiplicity)` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    blocks: Vec<(f64, usize)>,
}

impl CurvatureProfile {
    pub fn new(blocks: Vec<(f64, usize)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Dimension("empty curvature profile".into()));
        }
        if let Some((k, _)) = blocks.iter().find(|(_, m)| *m == 0) {
            return Err(Error::Dimension(format!("block with value {k} has multiplicity 0")));
        }
        Ok(Self { blocks })
    }

    /// `n` copies of the same curvature (totally umbilical hypersurfaces).
    pub fn umbilical(k: f64, n: usize) -> Result<Self> {
        Self::new(vec![(k, n)])
    }

    /// One block per entry.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&k| (k, 1)).collect())
    }

    pub fn blocks(&self) -> &[(f64, usize)] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(_, m)| m).sum()
    }

    pub fn expanded(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|&(k, m)| std::iter::repeat_n(k, m))
            .collect()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { blocks: self.blocks.iter().map(|&(k, m)| (lambda * k, m)).collect() }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Blocks sorted by `(|k|, k)` with equal values merged. Every evaluation
    /// runs on this form, so results do not depend on the order of the
    /// entries, and negating all entries keeps the order (odd functions flip
    /// sign exactly).
    fn canonical(&self) -> Vec<(f64, usize)> {
        let mut b = self.blocks.clone();
        b.sort_by(|x, y| x.0.abs().total_cmp(&y.0.abs()).then(x.0.total_cmp(&y.0)));
        let mut out: Vec<(f64, usize)> = Vec::with_capacity(b.len());
        for (k, m) in b {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += m,
                _ => out.push((k, m)),
            }
        }
        out
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// `e_0, ..., e_r` of the expanded vector.
fn elementary(blocks: &[(f64, usize)], r: usize) -> Vec<f64> {
    let mut e = vec![0.0; r + 1];
    e[0] = 1.0;
    for &(k, m) in blocks {
        // coefficients of (1 + k x)^m up to degree r
        let top = m.min(r);
        let coef: Vec<f64> = (0..=top).map(|i| binomial(m, i) * k.powi(i as i32)).collect();
        for j in (1..=r).rev() {
            let mut acc = 0.0;
            for (i, c) in coef.iter().enumerate().skip(1) {
                if i > j {
                    break;
                }
                acc += c * e[j - i];
            }
            e[j] += acc;
        }
    }
    e
}

/// A Weingarten function.
#[derive(Debug, Clone, PartialEq)]
pub enum WeingartenSpec {
    /// `H_r`, the (non-normalized) r-th mean curvature.
    MeanCurvature(usize),
    /// `|A|^2 = Σ k_i^2`.
    SquaredNorm,
    /// Gauss–Kronecker curvature `K = H_n`.
    GaussK,
    /// `base^p`, `p > 0`.
    Power { base: Box<WeingartenSpec>, p: f64 },
}

impl WeingartenSpec {
    pub fn power(base: WeingartenSpec, p: f64) -> Self {
        WeingartenSpec::Power { base: Box::new(base), p }
    }

    /// Homogeneity degree on an `n`-dimensional hypersurface.
    pub fn degree(&self, n: usize) -> f64 {
        match self {
            WeingartenSpec::MeanCurvature(r) => *r as f64,
            WeingartenSpec::SquaredNorm => 2.0,
            WeingartenSpec::GaussK => n as f64,
            WeingartenSpec::Power { base, p } => p * base.degree(n),
        }
    }

    /// Whether `W(-k) = -W(k)`.
    pub fn is_odd(&self, n: usize) -> bool {
        match self {
            WeingartenSpec::MeanCurvature(r) => r % 2 == 1,
            WeingartenSpec::SquaredNorm => false,
            WeingartenSpec::GaussK => n % 2 == 1,
            WeingartenSpec::Power { base, p } => *p == 1.0 && base.is_odd(n),
        }
    }

    /// Checks the parameters against the hypersurface dimension `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Dimension("hypersurface dimension must be at least 1".into()));
        }
        match self {
            WeingartenSpec::MeanCurvature(r) if *r == 0 || *r > n => {
                Err(Error::Dimension(format!("H_{r} needs 1 <= r <= n = {n}")))
            }
            WeingartenSpec::Power { p, .. } if !(p.is_finite() && *p > 0.0) => {
                Err(Error::Invalid(format!("power exponent must be positive, got {p}")))
            }
            WeingartenSpec::Power { base, .. } => base.check(n),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            WeingartenSpec::MeanCurvature(r) => format!("H_{r}"),
            WeingartenSpec::SquaredNorm => "|A|^2".into(),
            WeingartenSpec::GaussK => "K".into(),
            WeingartenSpec::Power { base, p } => format!("({})^{p}", base.label()),
        }
    }

    pub fn eval(&self, k: &CurvatureProfile) -> Result<f64> {
        let n = k.dim();
        self.check(n)?;
        self.eval_blocks(&k.canonical())
    }

    fn eval_blocks(&self, blocks: &[(f64, usize)]) -> Result<f64> {
        match self {
            WeingartenSpec::MeanCurvature(r) => Ok(elementary(blocks, *r)[*r]),
            WeingartenSpec::SquaredNorm => Ok(blocks.iter().map(|&(k, m)| m as f64 * k * k).sum()),
            WeingartenSpec::GaussK => Ok(blocks.iter().map(|&(k, m)| k.powi(m as i32)).product()),
            WeingartenSpec::Power { base, p } => {
                let b = base.eval_blocks(blocks)?;
                pow(b, *p)
            }
        }
    }

    /// `∂W/∂k_i`, one entry per block of `k` in its given order.
    pub fn gradient(&self, k: &CurvatureProfile) -> Result<Vec<f64>> {
        let n = k.dim();
        self.check(n)?;
        (0..k.blocks.len()).map(|i| self.partial(k, i, n)).collect()
    }

    fn partial(&self, k: &CurvatureProfile, block: usize, n: usize) -> Result<f64> {
        match self {
            WeingartenSpec::MeanCurvature(r) => Ok(mean_partial(k, block, *r)),
            WeingartenSpec::GaussK => Ok(mean_partial(k, block, n)),
            WeingartenSpec::SquaredNorm => Ok(2.0 * k.blocks[block].0),
            WeingartenSpec::Power { base, p } => {
                let b = base.eval_blocks(&k.canonical())?;
                let db = base.partial(k, block, n)?;
                if *p == 1.0 {
                    return Ok(db);
                }
                Ok(p * pow(b, p - 1.0)? * db)
            }
        }
    }

    /// Samples `samples` points of the positive cone in dimension `n` and
    /// checks the Weingarten axioms on each.
    pub fn validate_axioms(&self, n: usize, samples: usize, seed: u64) -> AxiomReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let odd = self.is_odd(n);
        let degree = self.degree(n);
        let mut report = AxiomReport::new(odd);

        if let Err(e) = self.check(n) {
            for c in report.checks.iter_mut() {
                c.outcome = AxiomOutcome::Fail { point: vec![], detail: e.to_string() };
            }
            return report;
        }

        for _ in 0..samples.max(1) {
            let point: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..4.0)).collect();
            let prof = CurvatureProfile::from_values(&point).expect("n >= 1");
            let (w, grad) = match (self.eval(&prof), self.gradient(&prof)) {
                (Ok(w), Ok(g)) => (w, g),
                (Err(e), _) | (_, Err(e)) => {
                    report.record(Axiom::Positivity, &point, || Some(e.to_string()));
                    continue;
                }
            };

            report.record(Axiom::Positivity, &point, || {
                (!(w > 0.0)).then(|| format!("W = {w:e}"))
            });
            report.record(Axiom::Monotonicity, &point, || {
                grad.iter()
                    .position(|g| !(*g > 0.0))
                    .map(|i| format!("dW/dk_{} = {:e}", i + 1, grad[i]))
            });
            report.record(Axiom::Homogeneity, &point, || {
                let euler: f64 = point.iter().zip(&grad).map(|(k, g)| k * g).sum();
                let expected = degree * w;
                let rel = (euler - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
                (rel > 1e-8).then(|| format!("Σ k_i ∂W/∂k_i = {euler:e}, degree·W = {expected:e}"))
            });
            let mut shuffled = point.clone();
            shuffled.shuffle(&mut rng);
            report.record(Axiom::Symmetry, &point, || {
                let ws = self.eval(&CurvatureProfile::from_values(&shuffled).expect("n >= 1"));
                match ws {
                    Ok(ws) if ws == w => None,
                    Ok(ws) => Some(format!("W(σk) = {ws:e} != W(k) = {w:e}")),
                    Err(e) => Some(e.to_string()),
                }
            });
            if odd {
                report.record(Axiom::Oddness, &point, || match self.eval(&prof.negated()) {
                    Ok(wn) if (wn + w).abs() <= 1e-12 * w.abs() => None,
                    Ok(wn) => Some(format!("W(-k) = {wn:e}, -W(k) = {:e}", -w)),
                    Err(e) => Some(e.to_string()),
                });
            }
        }
        report
    }
}

fn pow(b: f64, p: f64) -> Result<f64> {
    if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
        Ok(b.powi(p as i32))
    } else if b < 0.0 {
        Err(Error::NegativeBase { base: b, p })
    } else {
        Ok(b.powf(p))
    }
}

/// `∂H_r/∂k` for one entry of `block`: `H_{r-1}` of the remaining entries.
fn mean_partial(k: &CurvatureProfile, block: usize, r: usize) -> f64 {
    let mut rest = k.blocks.clone();
    rest[block].1 -= 1;
    rest.retain(|(_, m)| *m > 0);
    let rest = CurvatureProfile { blocks: rest }.canonical();
    elementary(&rest, r - 1)[r - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Positivity,
    Monotonicity,
    Homogeneity,
    Symmetry,
    Oddness,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Positivity => "positivity",
            Axiom::Monotonicity => "monotonicity",
            Axiom::Homogeneity => "euler-homogeneity",
            Axiom::Symmetry => "symmetry",
            Axiom::Oddness => "oddness",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxiomOutcome {
    Pass,
    Skipped,
    Fail { point: Vec<f64>, detail: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub outcome: AxiomOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    fn new(odd: bool) -> Self {
        let checks = [
            Axiom::Positivity,
            Axiom::Monotonicity,
            Axiom::Homogeneity,
            Axiom::Symmetry,
            Axiom::Oddness,
        ]
        .into_iter()
        .map(|axiom| AxiomCheck {
            axiom,
            outcome: if axiom == Axiom::Oddness && !odd { AxiomOutcome::Skipped } else { AxiomOutcome::Pass },
        })
        .collect();
        Self { checks }
    }

    // keeps only the first counterexample per axiom
    fn record(&mut self, axiom: Axiom, point: &[f64], failure: impl FnOnce() -> Option<String>) {
        let check = self.checks.iter_mut().find(|c| c.axiom == axiom).expect("all axioms present");
        if check.outcome != AxiomOutcome::Pass {
            return;
        }
        if let Some(detail) = failure() {
            check.outcome = AxiomOutcome::Fail { point: point.to_vec(), detail };
        }
    }

    pub fn outcome(&self, axiom: Axiom) -> &AxiomOutcome {
        &self.checks.iter().find(|c| c.axiom == axiom).expect("all axioms present").outcome
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.outcome, AxiomOutcome::Fail { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    /// Direct sum over all r-subsets.
    fn brute_force_h(values: &[f64], r: usize) -> f64 {
        let n = values.len();
        let mut total = 0.0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == r {
                total += (0..n).filter(|i| mask & (1 << i) != 0).map(|i| values[i]).product::<f64>();
            }
        }
        total
    }

    fn p(blocks: &[(f64, usize)]) -> CurvatureProfile {
        CurvatureProfile::new(blocks.to_vec()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(WeingartenSpec::MeanCurvature(1).eval(&p(&[(1.0, 3)])).unwrap(), 3.0);
        let k = p(&[(1.0, 1), (2.0, 1), (3.0, 1)]);
        assert_eq!(brute_force_h(&[1.0, 2.0, 3.0], 2), 11.0);
        assert_eq!(WeingartenSpec::MeanCurvature(2).eval(&k).unwrap(), 11.0);

        let tau: f64 = 0.7;
        let k = p(&[(1.0 / tau.tan(), 3), (-tau.tan(), 2)]);
        let expected = (1.0 / tau.tan()).powi(3) * (-tau.tan()).powi(2);
        let got = WeingartenSpec::GaussK.eval(&k).unwrap();
        assert!((got - expected).abs() < 1e-14 * expected.abs());
        assert!((got - 1.0 / tau.tan()).abs() < 1e-14);

        let c = 1.0 / 1.3f64.tan();
        let got = WeingartenSpec::SquaredNorm.eval(&p(&[(c, 4)])).unwrap();
        assert!((got - 4.0 * c * c).abs() < 1e-14);
    }

    #[test]
    fn gradient_examples() {
        let g = WeingartenSpec::SquaredNorm.gradient(&p(&[(3.0, 1), (4.0, 1)])).unwrap();
        assert_eq!(g, vec![6.0, 8.0]);
        let g = WeingartenSpec::MeanCurvature(2).gradient(&p(&[(1.0, 1), (2.0, 1), (3.0, 1)])).unwrap();
        assert_eq!(g, vec![5.0, 4.0, 3.0]);
        let g = WeingartenSpec::MeanCurvature(1).gradient(&p(&[(0.3, 2), (-7.0, 1)])).unwrap();
        assert_eq!(g, vec![1.0, 1.0]);
    }

    #[test]
    fn gradient_h2_matches_finite_differences() {
        let spec = WeingartenSpec::MeanCurvature(2);
        let base = [1.0, 2.0, 3.0];
        let g = spec.gradient(&CurvatureProfile::from_values(&base).unwrap()).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut up = base;
            let mut dn = base;
            up[i] += h;
            dn[i] -= h;
            let fd = (spec.eval(&CurvatureProfile::from_values(&up).unwrap()).unwrap()
                - spec.eval(&CurvatureProfile::from_values(&dn).unwrap()).unwrap())
                / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn dimension_errors() {
        let k = p(&[(1.0, 2)]);
        assert!(matches!(WeingartenSpec::MeanCurvature(3).eval(&k), Err(Error::Dimension(_))));
        assert!(matches!(WeingartenSpec::MeanCurvature(0).eval(&k), Err(Error::Dimension(_))));
        assert!(CurvatureProfile::new(vec![]).is_err());
        assert!(CurvatureProfile::new(vec![(1.0, 0)]).is_err());
        let sqrt_h1 = WeingartenSpec::power(WeingartenSpec::MeanCurvature(1), 0.5);
        assert!(matches!(sqrt_h1.eval(&p(&[(-1.0, 2)])), Err(Error::NegativeBase { .. })));
        let cube = WeingartenSpec::power(WeingartenSpec::MeanCurvature(1), 3.0);
        assert_eq!(cube.eval(&p(&[(-1.0, 2)])).unwrap(), -8.0);
    }

    #[test]
    fn metadata() {
        assert_eq!(WeingartenSpec::MeanCurvature(3).degree(5), 3.0);
        assert_eq!(WeingartenSpec::GaussK.degree(5), 5.0);
        assert_eq!(WeingartenSpec::power(WeingartenSpec::SquaredNorm, 1.5).degree(4), 3.0);
        assert!(WeingartenSpec::MeanCurvature(3).is_odd(4));
        assert!(!WeingartenSpec::MeanCurvature(2).is_odd(4));
        assert!(!WeingartenSpec::SquaredNorm.is_odd(4));
        assert!(WeingartenSpec::power(WeingartenSpec::MeanCurvature(1), 1.0).is_odd(4));
        assert!(!WeingartenSpec::power(WeingartenSpec::MeanCurvature(1), 3.0).is_odd(4));
    }

    #[test]
    fn axioms_h3_n4() {
        let report = WeingartenSpec::MeanCurvature(3).validate_axioms(4, 100, 7);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(*report.outcome(Axiom::Oddness), AxiomOutcome::Pass);
    }

    #[test]
    fn axioms_squared_norm_skips_oddness() {
        let report = WeingartenSpec::SquaredNorm.validate_axioms(4, 100, 7);
        assert!(report.all_passed());
        assert_eq!(*report.outcome(Axiom::Oddness), AxiomOutcome::Skipped);
    }

    #[test]
    fn axioms_h1_single_sample() {
        let report = WeingartenSpec::MeanCurvature(1).validate_axioms(3, 1, 0);
        assert_eq!(*report.outcome(Axiom::Homogeneity), AxiomOutcome::Pass);
        let k = CurvatureProfile::from_values(&[0.5, 1.5, 2.25]).unwrap();
        let spec = WeingartenSpec::MeanCurvature(1);
        let euler: f64 = spec.gradient(&k).unwrap().iter().zip(k.expanded()).map(|(g, v)| g * v).sum();
        assert_eq!(euler, spec.eval(&k).unwrap());
    }

    #[test]
    fn axioms_detect_invalid_spec() {
        let report = WeingartenSpec::MeanCurvature(5).validate_axioms(3, 10, 0);
        assert!(!report.all_passed());
    }

    #[test]
    fn recurrence_matches_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=8 {
            for _ in 0..5 {
                let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                // also exercise repeated values through multiplicities
                let mut blocks: Vec<(f64, usize)> = vec![];
                for v in &vals {
                    match blocks.last_mut() {
                        Some(b) if rng.gen_bool(0.3) => b.1 += 1,
                        _ => blocks.push((*v, 1)),
                    }
                }
                let prof = CurvatureProfile::new(blocks).unwrap();
                let expanded = prof.expanded();
                for r in 1..=n {
                    let fast = WeingartenSpec::MeanCurvature(r).eval(&prof).unwrap();
                    let slow = brute_force_h(&expanded, r);
                    let scale = expanded.iter().map(|x| x.abs()).fold(1.0, f64::max).powi(r as i32)
                        * binomial(n, r);
                    assert!((fast - slow).abs() <= 1e-12 * scale, "n={n} r={r} {fast} {slow}");
                }
            }
        }
    }

    fn spec_strategy() -> impl Strategy<Value = WeingartenSpec> {
        prop_oneof![
            (1usize..=6).prop_map(WeingartenSpec::MeanCurvature),
            Just(WeingartenSpec::SquaredNorm),
            Just(WeingartenSpec::GaussK),
            (1usize..=3, 0.5f64..3.0)
                .prop_map(|(r, p)| WeingartenSpec::power(WeingartenSpec::MeanCurvature(r), p)),
        ]
    }

    proptest! {
        #[test]
        fn permutation_invariant(spec in spec_strategy(),
                                 vals in proptest::collection::vec(0.01f64..5.0, 6..=9),
                                 seed in any::<u64>()) {
            let mut shuffled = vals.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let a = spec.eval(&CurvatureProfile::from_values(&vals).unwrap()).unwrap();
            let b = spec.eval(&CurvatureProfile::from_values(&shuffled).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn homogeneous(spec in spec_strategy(),
                       vals in proptest::collection::vec(0.05f64..3.0, 6..=8)) {
            let k = CurvatureProfile::from_values(&vals).unwrap();
            let n = k.dim();
            let w = spec.eval(&k).unwrap();
            for lambda in [0.5, 2.0, 10.0] {
                let wl = spec.eval(&k.scaled(lambda)).unwrap();
                let expected = lambda.powf(spec.degree(n)) * w;
                prop_assert!((wl - expected).abs() <= 1e-10 * expected.abs());
            }
        }

        #[test]
        fn gradient_matches_central_differences(spec in spec_strategy(),
                                                vals in proptest::collection::vec(0.2f64..3.0, 6..=8)) {
            let k = CurvatureProfile::from_values(&vals).unwrap();
            let g = spec.gradient(&k).unwrap();
            for i in 0..vals.len() {
                let h = 1e-6 * vals[i];
                let mut up = vals.clone();
                let mut dn = vals.clone();
                up[i] += h;
                dn[i] -= h;
                let fd = (spec.eval(&CurvatureProfile::from_values(&up).unwrap()).unwrap()
                    - spec.eval(&CurvatureProfile::from_values(&dn).unwrap()).unwrap()) / (2.0 * h);
                prop_assert!((fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1e-300), "i={} fd={} g={}", i, fd, g[i]);
            }
        }

        #[test]
        fn odd_specs_flip_sign(r in (0usize..3).prop_map(|i| 2 * i + 1),
                               vals in proptest::collection::vec(-3.0f64..3.0, 5..=8)) {
            let k = CurvatureProfile::from_values(&vals).unwrap();
            let spec = WeingartenSpec::MeanCurvature(r);
            let w = spec.eval(&k).unwrap();
            let wn = spec.eval(&k.negated()).unwrap();
            prop_assert_eq!(wn, -w);
        }
    }
}
