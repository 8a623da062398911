//! The bi-objective benchmark problems (Schaffer N.1 and ZDT1, 2, 3, 4, 6),
//! their box bounds and samplers for their analytic Pareto-optimal fronts.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bitcore::{decode_real, BitString, DecodingSpec};
use crate::error::{Error, Result};

/// A pair of objective values, both minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub f1: f64,
    pub f2: f64,
}

impl ObjectiveVector {
    pub fn new(f1: f64, f2: f64) -> Result<Self> {
        if f1.is_finite() && f2.is_finite() {
            Ok(ObjectiveVector { f1, f2 })
        } else {
            Err(Error::NonFiniteObjective { f1, f2 })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Schaffer,
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
}

impl Problem {
    pub const ALL: [Problem; 6] = [
        Problem::Schaffer,
        Problem::Zdt1,
        Problem::Zdt2,
        Problem::Zdt3,
        Problem::Zdt4,
        Problem::Zdt6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Schaffer => "schaffer",
            Problem::Zdt1 => "zdt1",
            Problem::Zdt2 => "zdt2",
            Problem::Zdt3 => "zdt3",
            Problem::Zdt4 => "zdt4",
            Problem::Zdt6 => "zdt6",
        }
    }

    pub fn num_variables(self) -> usize {
        match self {
            Problem::Schaffer => 1,
            Problem::Zdt1 | Problem::Zdt2 | Problem::Zdt3 => 30,
            Problem::Zdt4 | Problem::Zdt6 => 10,
        }
    }

    pub fn bounds(self) -> Vec<(f64, f64)> {
        let n = self.num_variables();
        match self {
            Problem::Schaffer => vec![(-10.0, 10.0)],
            Problem::Zdt4 => std::iter::once((0.0, 1.0))
                .chain(std::iter::repeat_n((-10.0, 10.0), n - 1))
                .collect(),
            _ => vec![(0.0, 1.0); n],
        }
    }

    /// Second objective along the analytic Pareto-optimal curve, as a
    /// function of the first objective. For ZDT3 this is the full `g = 1`
    /// curve, parts of which are dominated.
    pub fn front_curve(self, f1: f64) -> f64 {
        match self {
            Problem::Schaffer => (f1.sqrt() - 2.0).powi(2),
            Problem::Zdt1 | Problem::Zdt4 => 1.0 - f1.sqrt(),
            Problem::Zdt2 | Problem::Zdt6 => 1.0 - f1 * f1,
            Problem::Zdt3 => 1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin(),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .or_else(|| (lower == "schaeffer").then_some(Problem::Schaffer))
            .ok_or_else(|| Error::UnknownName {
                kind: "problem",
                name: s.to_string(),
            })
    }
}

/// A problem together with its bit-level encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub bits_per_variable: usize,
}

impl ProblemSpec {
    pub fn new(problem: Problem, bits_per_variable: usize) -> Result<Self> {
        // validates the bit width
        DecodingSpec::new(bits_per_variable, 0.0, 1.0)?;
        Ok(ProblemSpec {
            problem,
            bits_per_variable,
        })
    }

    pub fn num_variables(&self) -> usize {
        self.problem.num_variables()
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.problem.bounds()
    }

    /// Length of a full position bit string.
    pub fn position_len(&self) -> usize {
        self.num_variables() * self.bits_per_variable
    }

    pub fn decoding_specs(&self) -> Vec<DecodingSpec> {
        self.bounds()
            .into_iter()
            .map(|(lo, hi)| {
                DecodingSpec::new(self.bits_per_variable, lo, hi)
                    .expect("problem bounds and bit width are valid")
            })
            .collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        evaluate(self.problem, x)
    }

    pub fn evaluate_position(&self, position: &BitString) -> Result<ObjectiveVector> {
        let x = decode_real(position, &self.decoding_specs())?;
        self.evaluate(&x)
    }
}

/// Evaluates `problem` at the real decision vector `x`.
pub fn evaluate(problem: Problem, x: &[f64]) -> Result<ObjectiveVector> {
    let n = problem.num_variables();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    for (index, (&value, (lower, upper))) in x.iter().zip(problem.bounds()).enumerate() {
        if !(lower..=upper).contains(&value) {
            return Err(Error::OutOfBounds {
                index,
                value,
                lower,
                upper,
            });
        }
    }

    let tail_sum = || x[1..].iter().sum::<f64>();
    let (f1, f2) = match problem {
        Problem::Schaffer => (x[0] * x[0], (x[0] - 2.0).powi(2)),
        Problem::Zdt1 => {
            let g = 1.0 + 9.0 / (n - 1) as f64 * tail_sum();
            let f1 = x[0];
            (f1, g * (1.0 - (f1 / g).sqrt()))
        }
        Problem::Zdt2 => {
            let g = 1.0 + 9.0 / (n - 1) as f64 * tail_sum();
            let f1 = x[0];
            (f1, g * (1.0 - (f1 / g).powi(2)))
        }
        Problem::Zdt3 => {
            let g = 1.0 + 9.0 / (n - 1) as f64 * tail_sum();
            let f1 = x[0];
            let r = f1 / g;
            (f1, g * (1.0 - r.sqrt() - r * (10.0 * PI * f1).sin()))
        }
        Problem::Zdt4 => {
            let g = 1.0
                + 10.0 * (n - 1) as f64
                + x[1..]
                    .iter()
                    .map(|&xk| xk * xk - 10.0 * (4.0 * PI * xk).cos())
                    .sum::<f64>();
            let f1 = x[0];
            (f1, g * (1.0 - (f1 / g).sqrt()))
        }
        Problem::Zdt6 => {
            let f1 = 1.0 - (-4.0 * x[0]).exp() * (6.0 * PI * x[0]).sin().powi(6);
            let g = 1.0 + 9.0 * (tail_sum() / 9.0).powf(0.25);
            (f1, g * (1.0 - (f1 / g).powi(2)))
        }
    };
    ObjectiveVector::new(f1, f2)
}

/// Smallest attainable first objective of ZDT6, reached near `x1 = 1/12`.
pub fn zdt6_min_f1() -> f64 {
    static MIN: OnceLock<f64> = OnceLock::new();
    *MIN.get_or_init(|| {
        // golden-section search for the peak of exp(-4x) sin^6(6 pi x) on [0, 1/6]
        let peak = |x: f64| (-4.0 * x).exp() * (6.0 * PI * x).sin().powi(6);
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0, 1.0 / 6.0);
        while b - a > 1e-15 {
            let c = b - ratio * (b - a);
            let d = a + ratio * (b - a);
            if peak(c) > peak(d) {
                b = d;
            } else {
                a = c;
            }
        }
        1.0 - peak(0.5 * (a + b))
    })
}

const ZDT3_DENSE_SAMPLES: usize = 200_000;

/// Uniformly parameterized sample of `problem`'s Pareto-optimal front.
pub fn true_front(problem: Problem, num_points: usize) -> Result<Vec<ObjectiveVector>> {
    if num_points < 2 {
        return Err(Error::invalid(
            "num_points",
            "at least two points are required",
        ));
    }
    let grid = |lo: f64, hi: f64| {
        (0..num_points).map(move |k| lo + (hi - lo) * k as f64 / (num_points - 1) as f64)
    };
    let points = match problem {
        Problem::Schaffer => grid(0.0, 2.0)
            .map(|x| ObjectiveVector {
                f1: x * x,
                f2: (x - 2.0).powi(2),
            })
            .collect(),
        Problem::Zdt1 | Problem::Zdt2 | Problem::Zdt4 => grid(0.0, 1.0)
            .map(|f1| ObjectiveVector {
                f1,
                f2: problem.front_curve(f1),
            })
            .collect(),
        Problem::Zdt6 => grid(zdt6_min_f1(), 1.0)
            .map(|f1| ObjectiveVector {
                f1,
                f2: problem.front_curve(f1),
            })
            .collect(),
        Problem::Zdt3 => {
            let dense = ZDT3_DENSE_SAMPLES.max(100 * num_points);
            let mut survivors = Vec::new();
            let mut best_f2 = f64::INFINITY;
            // f1 ascending, so a point survives iff it improves on every f2 seen so far
            for k in 0..dense {
                let f1 = k as f64 / (dense - 1) as f64;
                let f2 = problem.front_curve(f1);
                if f2 < best_f2 {
                    best_f2 = f2;
                    survivors.push(ObjectiveVector { f1, f2 });
                }
            }
            let last = survivors.len() - 1;
            (0..num_points)
                .map(|k| survivors[(k * last + (num_points - 1) / 2) / (num_points - 1)])
                .collect()
        }
    };
    Ok(points)
}

/// Componentwise minimum and maximum of the analytic front, used to
/// normalize objective values before computing hypervolume.
pub fn ideal_and_nadir(problem: Problem) -> (ObjectiveVector, ObjectiveVector) {
    let front = true_front(problem, 10_000).expect("10_000 points is a valid sample size");
    let mut ideal = ObjectiveVector {
        f1: f64::INFINITY,
        f2: f64::INFINITY,
    };
    let mut nadir = ObjectiveVector {
        f1: f64::NEG_INFINITY,
        f2: f64::NEG_INFINITY,
    };
    for p in &front {
        ideal.f1 = ideal.f1.min(p.f1);
        ideal.f2 = ideal.f2.min(p.f2);
        nadir.f1 = nadir.f1.max(p.f1);
        nadir.f2 = nadir.f2.max(p.f2);
    }
    (ideal, nadir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn problem_dimensions_and_bounds() {
        assert_eq!(Problem::Schaffer.bounds(), vec![(-10.0, 10.0)]);
        for p in [Problem::Zdt1, Problem::Zdt2, Problem::Zdt3] {
            assert_eq!(p.bounds(), vec![(0.0, 1.0); 30]);
        }
        let zdt4 = Problem::Zdt4.bounds();
        assert_eq!(zdt4.len(), 10);
        assert_eq!(zdt4[0], (0.0, 1.0));
        assert!(zdt4[1..].iter().all(|&b| b == (-10.0, 10.0)));
        assert_eq!(Problem::Zdt6.bounds(), vec![(0.0, 1.0); 10]);
    }

    #[test]
    fn names_roundtrip() {
        for p in Problem::ALL {
            assert_eq!(p.name().parse::<Problem>().unwrap(), p);
        }
        assert_eq!("ZDT4".parse::<Problem>().unwrap(), Problem::Zdt4);
        assert!("zdt5".parse::<Problem>().is_err());
    }

    #[test]
    fn evaluation_examples() {
        let v = evaluate(Problem::Schaffer, &[0.0]).unwrap();
        assert_eq!((v.f1, v.f2), (0.0, 4.0));
        let v = evaluate(Problem::Zdt1, &[0.0; 30]).unwrap();
        assert_eq!((v.f1, v.f2), (0.0, 1.0));
        let v = evaluate(Problem::Zdt4, &[0.0; 10]).unwrap();
        assert_eq!((v.f1, v.f2), (0.0, 1.0));
        let v = evaluate(Problem::Zdt6, &[0.0; 10]).unwrap();
        assert_eq!((v.f1, v.f2), (1.0, 0.0));
    }

    #[test]
    fn zdt_hand_values() {
        // g = 1 + 9/29 * 29 * 0.5 = 5.5
        let mut x = vec![0.5; 30];
        x[0] = 0.25;
        let v = evaluate(Problem::Zdt1, &x).unwrap();
        assert!(close(v.f2, 5.5 * (1.0 - (0.25f64 / 5.5).sqrt()), 1e-12));
        let v = evaluate(Problem::Zdt2, &x).unwrap();
        assert!(close(v.f2, 5.5 * (1.0 - (0.25f64 / 5.5).powi(2)), 1e-12));
        // x_k = 0.5 is a ZDT4 local optimum: each term 0.25 - 10cos(2pi) = -9.75
        let mut x = vec![0.5; 10];
        x[0] = 1.0;
        let v = evaluate(Problem::Zdt4, &x).unwrap();
        let g: f64 = 1.0 + 90.0 + 9.0 * (0.25 - 10.0);
        assert!(close(v.f2, g * (1.0 - (1.0 / g).sqrt()), 1e-9));
    }

    #[test]
    fn evaluation_rejects_bad_input() {
        assert!(matches!(
            evaluate(Problem::Zdt1, &[0.0; 29]),
            Err(Error::LengthMismatch {
                expected: 30,
                actual: 29
            })
        ));
        assert!(matches!(
            evaluate(Problem::Schaffer, &[10.5]),
            Err(Error::OutOfBounds { index: 0, .. })
        ));
        let mut x = vec![0.0; 10];
        x[3] = -10.0;
        assert!(evaluate(Problem::Zdt4, &x).is_ok());
        x[0] = -0.1;
        assert!(evaluate(Problem::Zdt4, &x).is_err());
    }

    #[test]
    fn nan_objective_is_rejected() {
        assert!(ObjectiveVector::new(f64::NAN, 0.0).is_err());
        assert!(ObjectiveVector::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn zdt1_and_zdt2_fronts_follow_closed_forms() {
        let f = true_front(Problem::Zdt1, 101).unwrap();
        assert_eq!(f.first().map(|p| (p.f1, p.f2)), Some((0.0, 1.0)));
        assert_eq!(f.last().map(|p| (p.f1, p.f2)), Some((1.0, 0.0)));
        assert!(f.iter().all(|p| close(p.f2, 1.0 - p.f1.sqrt(), 1e-15)));
        let f = true_front(Problem::Zdt2, 101).unwrap();
        assert!(f.iter().all(|p| close(p.f2, 1.0 - p.f1 * p.f1, 1e-15)));
    }

    fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
        a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2)
    }

    #[test]
    fn every_front_is_mutually_nondominated() {
        for p in Problem::ALL {
            let f = true_front(p, 300).unwrap();
            assert_eq!(f.len(), 300);
            for a in &f {
                assert!(!f.iter().any(|b| dominates(b, a)), "{p}: {a:?} dominated");
            }
        }
    }

    #[test]
    fn zdt3_front_drops_dominated_arcs() {
        let f = true_front(Problem::Zdt3, 1000).unwrap();
        assert_eq!((f[0].f1, f[0].f2), (0.0, 1.0));
        // the curve rises again between its five disconnected segments
        assert!(f.iter().all(|p| p.f1 < 0.86));
        assert!(!f.iter().any(|p| p.f1 > 0.1 && p.f1 < 0.18));
    }

    #[test]
    fn evaluator_agrees_with_front_on_g_equals_one() {
        for p in [Problem::Zdt1, Problem::Zdt2, Problem::Zdt3] {
            for k in 0..=50 {
                let mut x = vec![0.0; 30];
                x[0] = k as f64 / 50.0;
                let v = evaluate(p, &x).unwrap();
                assert!(close(v.f2, p.front_curve(v.f1), 1e-12));
            }
        }
        // sampled ZDT3 points are reproduced by the evaluator
        for q in true_front(Problem::Zdt3, 50).unwrap() {
            let mut x = vec![0.0; 30];
            x[0] = q.f1;
            let v = evaluate(Problem::Zdt3, &x).unwrap();
            assert!(close(v.f2, q.f2, 1e-12));
        }
    }

    #[test]
    fn zdt6_front_range() {
        let m = zdt6_min_f1();
        assert!(close(m, 0.280_775_319_1, 1e-9), "{m}");
        let (ideal, nadir) = ideal_and_nadir(Problem::Zdt6);
        assert!(close(ideal.f1, m, 1e-15));
        assert_eq!(ideal.f2, 0.0);
        assert_eq!(nadir.f1, 1.0);
        assert!(close(nadir.f2, 1.0 - m * m, 1e-15));
    }

    #[test]
    fn schaffer_extremes() {
        let (ideal, nadir) = ideal_and_nadir(Problem::Schaffer);
        assert_eq!((ideal.f1, ideal.f2), (0.0, 0.0));
        assert_eq!((nadir.f1, nadir.f2), (4.0, 4.0));
    }

    #[test]
    fn front_needs_two_points() {
        assert!(true_front(Problem::Zdt1, 1).is_err());
    }

    #[test]
    fn position_evaluation_chains_decoding() {
        let spec = ProblemSpec::new(Problem::Zdt1, 20).unwrap();
        assert_eq!(spec.position_len(), 600);
        let v = spec.evaluate_position(&BitString::zeros(600)).unwrap();
        assert_eq!((v.f1, v.f2), (0.0, 1.0));
        assert!(spec.evaluate_position(&BitString::zeros(599)).is_err());
    }
}
