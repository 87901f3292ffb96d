//! Label-query lower-bound lab: pools of Gaussian examples, near-isometry of
//! sampled row tuples, negative-capture probabilities and a pool query game.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{normal_cdf, Halfspace, Label, Point, UnitVector};
use crate::rng;

/// `m` i.i.d. `N(0, I_d)` examples labeled by a hidden halfspace.
#[derive(Debug, Clone)]
pub struct Pool {
    points: Vec<Point>,
    target: Halfspace,
    labels: Vec<Option<Label>>,
    revealed: Vec<bool>,
    history: Vec<usize>,
}

impl Pool {
    pub fn new(points: Vec<Point>, target: Halfspace) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("a pool needs at least one point"));
        }
        if points.iter().any(|x| x.len() != target.dim()) {
            return Err(Error::domain("pool points and target differ in dimension"));
        }
        let m = points.len();
        Ok(Pool {
            points,
            target,
            labels: vec![None; m],
            revealed: vec![false; m],
            history: Vec::new(),
        })
    }

    /// `m` fresh Gaussian points labeled by `target`.
    pub fn sample(m: usize, target: Halfspace, rng: &mut impl Rng) -> Result<Self> {
        let d = target.dim();
        let points = (0..m).map(|_| rng::gaussian_vector(d, rng)).collect();
        Self::new(points, target)
    }

    /// Like [`Pool::sample`] with a uniformly random target direction.
    pub fn random(d: usize, m: usize, t_star: f64, rng: &mut impl Rng) -> Result<Self> {
        let w = uniform_sphere(d, rng)?;
        Self::sample(m, Halfspace::new(w, t_star), rng)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn target(&self) -> &Halfspace {
        &self.target
    }

    pub fn is_revealed(&self, i: usize) -> bool {
        self.revealed[i]
    }

    /// Revealed indices in query order.
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    /// Label of point `i`, computed once.
    pub fn label(&mut self, i: usize) -> Label {
        let (labels, points, target) = (&mut self.labels, &self.points, &self.target);
        *labels[i].get_or_insert_with(|| target.eval(&points[i]))
    }

    /// Label query: reveals `i` and returns its label.
    pub fn reveal(&mut self, i: usize) -> Result<Label> {
        if i >= self.len() {
            return Err(Error::domain(format!("index {i} is outside the pool")));
        }
        if self.revealed[i] {
            return Err(Error::domain(format!("index {i} was already revealed")));
        }
        self.revealed[i] = true;
        self.history.push(i);
        Ok(self.label(i))
    }

    /// Forgets which indices were revealed; cached labels stay.
    pub fn reset(&mut self) {
        self.revealed.iter_mut().for_each(|r| *r = false);
        self.history.clear();
    }
}

/// Uniform direction on `S^{d−1}` by normalizing a Gaussian.
pub fn uniform_sphere(d: usize, rng: &mut impl Rng) -> Result<UnitVector> {
    UnitVector::new(rng::gaussian_vector(d, rng))
}

/// `‖AAᵀ − dI‖₂ / d` for the rows of `A`.
pub fn isometry_ratio(rows: &[&Point]) -> Result<f64> {
    let k = rows.len();
    if k == 0 {
        return Err(Error::domain("isometry ratio of an empty tuple"));
    }
    let d = rows[0].len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::domain("rows differ in dimension"));
    }
    let gram = DMatrix::from_fn(k, k, |i, j| {
        rows[i].dot(rows[j]) - if i == j { d as f64 } else { 0.0 }
    });
    let eig = SymmetricEigen::new(gram);
    let norm = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, l| acc.max(l.abs()));
    Ok(norm / d as f64)
}

/// Max of [`isometry_ratio`] over `tuples` uniformly sampled `k`-subsets of the pool.
pub fn near_isometry_stat(pool: &Pool, k: usize, tuples: usize, rng: &mut impl Rng) -> Result<f64> {
    if k == 0 || k > pool.len().min(pool.dim()) {
        return Err(Error::domain(format!(
            "tuple size k = {k} must be in [1, min(m, d)] = [1, {}]",
            pool.len().min(pool.dim())
        )));
    }
    if tuples == 0 {
        return Err(Error::domain("at least one tuple is needed"));
    }
    let mut worst = 0.0f64;
    for _ in 0..tuples {
        let rows: Vec<&Point> = index::sample(rng, pool.len(), k)
            .iter()
            .map(|i| pool.point(i))
            .collect();
        worst = worst.max(isometry_ratio(&rows)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaptureEstimate {
    pub probability: f64,
    pub se: f64,
    pub trials: usize,
}

impl CaptureEstimate {
    /// `(probability)^{1/k} / (p ln(1/p))` with `p = Φ(−t*)`.
    pub fn normalized_ratio(&self, k: usize, t_star: f64) -> f64 {
        let p = normal_cdf(-t_star);
        self.probability.powf(1.0 / k as f64) / (p * (1.0 / p).ln())
    }
}

/// Fraction of uniform `w*` for which every row of `A` is negative for `sign(w*·x + t*)`.
pub fn negative_capture_prob(
    rows: &[Point],
    t_star: f64,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<CaptureEstimate> {
    if rows.is_empty() || trials == 0 {
        return Err(Error::domain("capture probability needs rows and trials"));
    }
    let d = rows[0].len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::domain("rows differ in dimension"));
    }
    let mut hits = 0usize;
    for _ in 0..trials {
        let w = uniform_sphere(d, rng)?;
        if rows.iter().all(|x| w.dot(x) + t_star < 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    Ok(CaptureEstimate {
        probability: p,
        se: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    })
}

/// How the query game picks the next pool index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryStrategy {
    RandomOrder,
    /// Maximizes `ŵ·x` for `ŵ` the mean of the negatives found so far; random until the first one.
    GreedyDirection,
    /// White-box baseline ordering by the true margin.
    OracleAided,
}

impl QueryStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            QueryStrategy::RandomOrder => "random",
            QueryStrategy::GreedyDirection => "greedy",
            QueryStrategy::OracleAided => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "random" => Some(QueryStrategy::RandomOrder),
            "greedy" => Some(QueryStrategy::GreedyDirection),
            "oracle" => Some(QueryStrategy::OracleAided),
            _ => None,
        }
    }

    fn next(
        &self,
        pool: &Pool,
        unrevealed: &mut Vec<usize>,
        negative_sum: &Point,
        found: usize,
        rng: &mut impl Rng,
    ) -> Option<usize> {
        if unrevealed.is_empty() {
            return None;
        }
        let slot = match self {
            QueryStrategy::GreedyDirection if found > 0 => {
                argmax(unrevealed, |i| negative_sum.dot(pool.point(i)))
            }
            QueryStrategy::OracleAided => {
                argmax(unrevealed, |i| -pool.target().margin(pool.point(i)))
            }
            _ => rng.random_range(0..unrevealed.len()),
        };
        Some(unrevealed.swap_remove(slot))
    }
}

fn argmax(indices: &[usize], score: impl Fn(usize) -> f64) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (slot, &i) in indices.iter().enumerate() {
        let s = score(i);
        if s > best.1 {
            best = (slot, s);
        }
    }
    best.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameOutcome {
    pub negatives_found: usize,
    pub queries_used: usize,
}

/// Reveals pool labels with `strategy` until `k` negatives are found or `budget` queries are spent.
/// The pool's revealed set is reset first.
pub fn play_query_game(
    pool: &mut Pool,
    strategy: QueryStrategy,
    k: usize,
    budget: usize,
    rng: &mut impl Rng,
) -> Result<GameOutcome> {
    if budget == 0 {
        return Err(Error::domain(
            "the query game needs a budget of at least one",
        ));
    }
    pool.reset();
    let mut unrevealed: Vec<usize> = (0..pool.len()).collect();
    let mut negative_sum = Point::zeros(pool.dim());
    let mut found = 0;
    let mut queries = 0;
    while found < k && queries < budget {
        let Some(i) = strategy.next(pool, &mut unrevealed, &negative_sum, found, rng) else {
            break;
        };
        queries += 1;
        if pool.reveal(i)?.is_negative() {
            found += 1;
            negative_sum += pool.point(i);
        }
    }
    Ok(GameOutcome {
        negatives_found: found,
        queries_used: queries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_rows_are_detected() {
        let mut r = rng::stream(1, 0);
        let x = rng::gaussian_vector(400, &mut r);
        let mut y = x.clone();
        y *= (400.0f64).sqrt() / x.norm();
        let ratio = isometry_ratio(&[&y, &y]).unwrap();
        assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_row_is_chi_squared_deviation() {
        let mut r = rng::stream(2, 0);
        let pool = Pool::random(100, 50, 1.0, &mut r).unwrap();
        let direct = (0..pool.len())
            .map(|i| (pool.point(i).norm_squared() - 100.0).abs() / 100.0)
            .fold(0.0f64, f64::max);
        let stat = near_isometry_stat(&pool, 1, 2000, &mut r).unwrap();
        assert!(stat <= direct + 1e-12);
        assert!(stat > 0.5 * direct);
    }

    #[test]
    fn zero_threshold_captures_half() {
        let mut r = rng::stream(3, 0);
        let x = rng::gaussian_vector(20, &mut r);
        let est = negative_capture_prob(&[x], 0.0, 40_000, &mut r).unwrap();
        assert!((est.probability - 0.5).abs() < 4.0 * est.se);
    }

    #[test]
    fn oracle_aided_needs_exactly_k() {
        let mut r = rng::stream(4, 0);
        let mut pool = Pool::random(10, 500, 1.0, &mut r).unwrap();
        let out = play_query_game(&mut pool, QueryStrategy::OracleAided, 5, 500, &mut r).unwrap();
        assert_eq!(
            out,
            GameOutcome {
                negatives_found: 5,
                queries_used: 5
            }
        );
    }

    #[test]
    fn game_respects_budget_and_never_repeats() {
        let mut r = rng::stream(5, 0);
        let mut pool = Pool::random(5, 100, 3.0, &mut r).unwrap();
        for s in [QueryStrategy::RandomOrder, QueryStrategy::GreedyDirection] {
            let out = play_query_game(&mut pool, s, 50, 30, &mut r).unwrap();
            assert!(out.queries_used <= 30);
            let mut h = pool.history().to_vec();
            h.sort_unstable();
            h.dedup();
            assert_eq!(h.len(), out.queries_used);
        }
        assert!(pool.reveal(pool.history()[0]).is_err());
    }
}
