use std::cmp::Ordering;
use std::fmt;

/// Exact solution cost `ΔF / (2·LT) + FS·LT` for a block of `FS` slots over `LT` links with net
/// fragment change `ΔF`.
///
/// Stored as a reduced fraction so equal costs compare equal without float tolerance. Since
/// `|ΔF| ≤ LT`, the fragment term lies in `[-1/2, 1/2]` and never outweighs a unit of `FS·LT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fitness {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fitness {
    pub fn new(delta_f: i64, hops: usize, slots: usize) -> Self {
        assert!(hops >= 1, "fitness needs at least one traversed link");
        let lt = hops as i64;
        let num = delta_f + 2 * slots as i64 * lt * lt;
        let den = 2 * lt;
        let g = gcd(num, den).max(1);
        Fitness { num: num / g, den: den / g }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `(numerator, denominator)` in lowest terms.
    pub fn ratio(&self) -> (i64, i64) {
        (self.num, self.den)
    }
}

impl Ord for Fitness {
    fn cmp(&self, other: &Self) -> Ordering {
        (i128::from(self.num) * i128::from(other.den)).cmp(&(i128::from(other.num) * i128::from(self.den)))
    }
}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4}", self.value())
    }
}
