//! Cubelike graphs: Cayley graphs of Z₂^d, with vertices ordered by binary value.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::hadamard::sylvester;
use crate::matrix::{rational, QMatrix, Rational};
use crate::pst::{PstReport, Verdict};
use crate::spectral::diagonalizes;
use crate::time::PiMultiple;

/// Largest dimension accepted for a connection set (elements are stored as `u64` bit patterns).
pub const MAX_DIMENSION: u32 = 32;
/// Largest dimension for which `build` materializes the dense graph.
pub const MAX_BUILD_DIMENSION: u32 = 12;
/// Largest dimension for exhaustive enumeration over all subsets.
pub const MAX_EXHAUSTIVE_DIMENSION: u32 = 5;
/// Ceiling on the number of fixed-size subsets a degree-restricted enumeration may visit.
pub const MAX_ENUMERATION: u128 = 1 << 32;

/// A set of distinct nonzero elements of Z₂^d. Bit `i` of an element is coordinate `e_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectionSet {
    d: u32,
    elements: Vec<u64>,
}

impl ConnectionSet {
    /// Sorts and validates; duplicates and the zero vector are rejected.
    pub fn new(d: u32, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        if d == 0 || d > MAX_DIMENSION {
            return Err(Error::Capacity(format!("dimension {d} outside 1..={MAX_DIMENSION}")));
        }
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::domain(format!("repeated element {}", bits(d, w[0]))));
            }
        }
        if let Some(&x) = elements.iter().find(|&&x| x == 0 || x >> d != 0) {
            return Err(Error::domain(format!("element {x:#b} is zero or wider than {d} bits")));
        }
        Ok(ConnectionSet { d, elements })
    }

    /// Standard basis `{e₁, …, e_d}`.
    pub fn basis(d: u32) -> Result<Self> {
        ConnectionSet::new(d, (0..d).map(|i| 1u64 << i))
    }

    /// All nonzero elements of Z₂^d.
    pub fn everything(d: u32) -> Result<Self> {
        if d >= 20 {
            return Err(Error::Capacity(format!("full connection set in dimension {d}")));
        }
        ConnectionSet::new(d, 1..(1u64 << d))
    }

    /// Parses comma-separated items that are either bitstrings (MSB first) or `e<i>` unit
    /// vectors with sums like `e1+e2`. Without `d`, bitstring width or the largest index decides.
    pub fn parse_items(spec: &str, d: Option<u32>) -> Result<Self> {
        let items: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let mut width = d;
        let mut values = Vec::with_capacity(items.len());
        for item in &items {
            if item.starts_with('e') {
                let mut v = 0u64;
                for term in item.split('+') {
                    let i: u32 = term
                        .trim()
                        .strip_prefix('e')
                        .and_then(|s| s.parse().ok())
                        .filter(|&i| (1..=MAX_DIMENSION).contains(&i))
                        .ok_or_else(|| Error::parse(format!("bad unit vector `{term}`")))?;
                    v ^= 1 << (i - 1);
                    if d.is_none() {
                        width = Some(width.unwrap_or(0).max(i));
                    }
                }
                values.push(v);
            } else {
                let len = item.len() as u32;
                match width {
                    Some(w) if d.is_some() && len != w => {
                        return Err(Error::parse(format!("bitstring `{item}` is not {w} wide")))
                    }
                    _ if d.is_none() => width = Some(width.unwrap_or(0).max(len)),
                    _ => {}
                }
                values.push(parse_bits(item)?);
            }
        }
        let d = width.ok_or_else(|| Error::parse("cannot infer the dimension of an empty set"))?;
        ConnectionSet::new(d, values)
    }

    /// File form: first line `d=<int>`, then one bitstring per line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let head = lines.next().ok_or_else(|| Error::parse("empty connection-set file"))?;
        let d: u32 = head
            .strip_prefix("d=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::parse(format!("expected `d=<int>`, found `{head}`")))?;
        let mut values = Vec::new();
        for line in lines {
            if line.len() != d as usize {
                return Err(Error::parse(format!("bitstring `{line}` is not {d} wide")));
            }
            values.push(parse_bits(line)?);
        }
        ConnectionSet::new(d, values)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("d={}\n", self.d);
        for b in self.bitstrings() {
            s.push_str(&b);
            s.push('\n');
        }
        s
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Elements as fixed-width bitstrings, MSB first, in increasing order.
    pub fn bitstrings(&self) -> Vec<String> {
        self.elements.iter().map(|&x| bits(self.d, x)).collect()
    }

    /// XOR of all elements.
    pub fn sigma(&self) -> u64 {
        self.elements.iter().fold(0, |acc, &x| acc ^ x)
    }

    /// Whether the elements span Z₂^d, i.e. whether the Cayley graph is connected.
    pub fn spans(&self) -> bool {
        gf2_rank(self.elements.iter().copied()) == self.d
    }

    /// Bipartite iff some functional `y` has odd product with every element.
    pub fn is_bipartite(&self) -> bool {
        // y·c = 1 for all c is solvable iff appending the constant 1 does not raise the rank
        let flag = 1u64 << 63;
        gf2_rank(self.elements.iter().copied()) == gf2_rank(self.elements.iter().map(|&c| c | flag))
    }

    /// The Cayley graph on 2^d vertices ordered by binary value.
    pub fn build(&self) -> Result<WeightedGraph> {
        if self.d > MAX_BUILD_DIMENSION {
            return Err(Error::Capacity(format!("{} vertices", 1u64 << self.d)));
        }
        let n = 1usize << self.d;
        let a = QMatrix::from_fn(n, |i, j| {
            if self.contains((i ^ j) as u64) {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        WeightedGraph::from_adjacency(&a)
    }

    /// Laplacian eigenvalue on Sylvester column `x`: `2·#{c : x·c odd}`.
    pub fn eigenvalue(&self, x: u64) -> u64 {
        2 * self.elements.iter().filter(|&&c| (c & x).count_ones() % 2 == 1).count() as u64
    }

    /// Laplacian spectrum in Sylvester column order.
    pub fn eigenvalues(&self) -> Vec<u64> {
        (0..1u64 << self.d).map(|x| self.eigenvalue(x)).collect()
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.bitstrings().join(","))
    }
}

impl FromStr for ConnectionSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with("d=") {
            ConnectionSet::from_text(s)
        } else {
            ConnectionSet::parse_items(s.trim().trim_start_matches('{').trim_end_matches('}'), None)
        }
    }
}

fn bits(d: u32, x: u64) -> String {
    (0..d).rev().map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Result<u64> {
    if s.is_empty() || s.len() > MAX_DIMENSION as usize || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::parse(format!("bad bitstring `{s}`")));
    }
    Ok(u64::from_str_radix(s, 2).expect("validated bitstring"))
}

/// Rank over GF(2) of a family of bit vectors.
pub fn gf2_rank(vectors: impl IntoIterator<Item = u64>) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

/// PST at π/2 from `j` to `j ⊕ σ` when σ ≠ 0; otherwise every vertex returns at π/2.
pub fn pst_by_sigma(c: &ConnectionSet) -> PstReport {
    let s = c.sigma() as usize;
    let n = 1usize << c.d();
    if s == 0 {
        return PstReport {
            verdict: Verdict::Periodic,
            pairs: Vec::new(),
            time: PiMultiple::half(),
            rule: "sigma".into(),
            fidelity: None,
        };
    }
    let pairs = (0..n).filter(|&j| j < j ^ s).map(|j| (j, j ^ s)).collect();
    PstReport {
        verdict: Verdict::Pst,
        pairs,
        time: PiMultiple::half(),
        rule: "sigma".into(),
        fidelity: None,
    }
}

/// gcd of the Hamming weights of the nonzero words in the row space of the `d × |C|` matrix
/// whose columns are the elements of `C`. Zero when the code is trivial.
pub fn code_weights(c: &ConnectionSet) -> Result<u64> {
    if c.d() > 24 {
        return Err(Error::Capacity(format!("row space of dimension up to {}", c.d())));
    }
    let words = c.len().div_ceil(64).max(1);
    // row i of M, as a bitset over the positions of C
    let rows: Vec<Vec<u64>> = (0..c.d())
        .map(|i| {
            let mut r = vec![0u64; words];
            for (pos, &x) in c.elements().iter().enumerate() {
                if x >> i & 1 == 1 {
                    r[pos / 64] |= 1 << (pos % 64);
                }
            }
            r
        })
        .collect();
    // Gray-code walk over all 2^d combinations of rows
    let mut word = vec![0u64; words];
    let mut g = 0u64;
    for step in 1u64..(1u64 << c.d()) {
        let flip = step.trailing_zeros() as usize;
        for (w, r) in word.iter_mut().zip(&rows[flip]) {
            *w ^= r;
        }
        let weight: u64 = word.iter().map(|w| w.count_ones() as u64).sum();
        if weight != 0 {
            g = g.gcd(&weight);
            if g == 1 {
                break;
            }
        }
    }
    Ok(g)
}

/// The code-weight gcd `D` in the regime σ = 0, where PST, if any, happens at π/(2D).
pub fn code_weight_gcd(c: &ConnectionSet) -> Result<u64> {
    if c.sigma() != 0 {
        return Err(Error::domain("σ ≠ 0: PST already happens at π/2"));
    }
    code_weights(c)
}

/// Connection set recovered from a (0,1) matrix, with `loops` set when the diagonal was all ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub set: ConnectionSet,
    pub loops: bool,
}

/// Splits `A = [[A₁, X], [X, A₁]]` recursively down to 1×1 blocks.
pub fn decompose_standard(a: &QMatrix) -> Result<Decomposition> {
    let n = a.n();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::domain(format!("order {n} is not a power of two ≥ 2")));
    }
    let k = n.trailing_zeros();
    if !a.is_symmetric() {
        return Err(Error::NotStandardDiagonalizable("matrix is not symmetric".into()));
    }
    let one = Rational::one();
    for i in 0..n {
        for j in 0..n {
            let x = a.get(i, j);
            if !x.is_zero() && *x != one {
                return Err(Error::domain("entries must be 0 or 1"));
            }
        }
    }
    let diag = a.diagonal();
    if diag.iter().any(|x| *x != diag[0]) {
        return Err(Error::NotStandardDiagonalizable("diagonal is not constant".into()));
    }
    if !diagonalizes(a, &sylvester(k)?)? {
        return Err(Error::NotStandardDiagonalizable("the Sylvester matrix does not diagonalize it".into()));
    }
    let loops = diag[0] == one;
    let base = if loops { a - &QMatrix::identity(n) } else { a.clone() };
    let mut elements = Vec::new();
    split(&base, 0, 0, n, 0, &mut elements)?;
    let set = ConnectionSet::new(k, elements)?;
    if set.build()?.adjacency() != &base {
        return Err(Error::Internal("decomposition does not rebuild the matrix".into()));
    }
    Ok(Decomposition { set, loops })
}

/// Collects elements of the block at (`r`, `c`) of size `m`; `prefix` holds the higher bits.
fn split(a: &QMatrix, r: usize, c: usize, m: usize, prefix: u64, out: &mut Vec<u64>) -> Result<()> {
    if m == 1 {
        if !a.get(r, c).is_zero() {
            out.push(prefix);
        }
        return Ok(());
    }
    let h = m / 2;
    for i in 0..h {
        for j in 0..h {
            if a.get(r + i, c + j) != a.get(r + h + i, c + h + j)
                || a.get(r + i, c + h + j) != a.get(r + h + i, c + j)
                || a.get(r + i, c + h + j) != a.get(r + j, c + h + i)
            {
                return Err(Error::NotStandardDiagonalizable(format!("block symmetry fails at size {m}")));
            }
        }
    }
    let bit = h.trailing_zeros();
    split(a, r, c, h, prefix, out)?;
    split(a, r, c + h, h, prefix | 1 << bit, out)
}

/// Restrictions applied while enumerating connection sets; `None` means unconstrained.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub connected: Option<bool>,
    pub degree: Option<usize>,
    pub bipartite: Option<bool>,
    pub sigma_nonzero: Option<bool>,
}

impl Filter {
    pub fn matches(&self, c: &ConnectionSet) -> bool {
        self.degree.is_none_or(|r| c.len() == r)
            && self.sigma_nonzero.is_none_or(|b| (c.sigma() != 0) == b)
            && self.connected.is_none_or(|b| c.spans() == b)
            && self.bipartite.is_none_or(|b| c.is_bipartite() == b)
    }
}

/// Subsets of the `2^d − 1` nonzero elements, encoded as masks (bit `i` ↔ element `i + 1`).
enum Masks {
    All { next: u64, end: u64 },
    Sized { next: Option<u64>, limit: u64 },
}

impl Iterator for Masks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self {
            Masks::All { next, end } => {
                if next == end {
                    return None;
                }
                let m = *next;
                *next += 1;
                Some(m)
            }
            Masks::Sized { next, limit } => {
                let m = (*next)?;
                // Gosper's hack: next mask with the same popcount
                *next = if m == 0 {
                    None
                } else {
                    let c = m & m.wrapping_neg();
                    let r = m + c;
                    let nm = (((r ^ m) >> 2) / c) | r;
                    (r != 0 && nm < *limit).then_some(nm)
                };
                Some(m)
            }
        }
    }
}

fn masks(d: u32, degree: Option<usize>) -> Result<Masks> {
    if d == 0 || d > 6 {
        return Err(Error::Capacity(format!("enumeration in dimension {d}")));
    }
    let slots = (1u32 << d) - 1;
    match degree {
        None => {
            if d > MAX_EXHAUSTIVE_DIMENSION {
                return Err(Error::Capacity(format!(
                    "exhaustive enumeration needs d ≤ {MAX_EXHAUSTIVE_DIMENSION}, got {d}"
                )));
            }
            Ok(Masks::All { next: 0, end: 1u64 << slots })
        }
        Some(r) => {
            if r as u32 > slots {
                return Ok(Masks::Sized { next: None, limit: 0 });
            }
            if binomial(slots as u128, r as u128) > MAX_ENUMERATION {
                return Err(Error::Capacity(format!("C({slots}, {r}) subsets")));
            }
            let limit = 1u64 << slots;
            let first = if r == 0 { 0 } else { u64::MAX >> (64 - r) };
            Ok(Masks::Sized { next: Some(first), limit })
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn from_mask(d: u32, mask: u64) -> ConnectionSet {
    let elements: Vec<u64> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
    ConnectionSet { d, elements }
}

/// Lazily yields the connection sets in Z₂^d that pass `filter`, in mask order.
/// Without a degree restriction this is exhaustive and needs `d ≤ 5`.
pub fn enumerate(d: u32, filter: Filter) -> Result<impl Iterator<Item = ConnectionSet>> {
    let it = masks(d, filter.degree)?;
    Ok(it.map(move |m| from_mask(d, m)).filter(move |c| filter.matches(c)))
}

/// Parallel form of [`enumerate`]; the result keeps the same order.
pub fn enumerate_parallel(d: u32, filter: &Filter) -> Result<Vec<ConnectionSet>> {
    let it = masks(d, filter.degree)?;
    match it {
        Masks::All { end, .. } => Ok((0..end)
            .into_par_iter()
            .map(|m| from_mask(d, m))
            .filter(|c| filter.matches(c))
            .collect()),
        sized => {
            let all: Vec<u64> = sized.collect();
            Ok(all.into_par_iter().map(|m| from_mask(d, m)).filter(|c| filter.matches(c)).collect())
        }
    }
}

/// Connected, non-bipartite, `deg`-regular cubelike graph on 2^k vertices with σ ≠ 0.
/// Starts from `{e₁, …, e_k, e₁+e₂}` and adds elements in increasing order.
pub fn regular_pst_family(k: u32, deg: usize) -> Result<(ConnectionSet, WeightedGraph)> {
    if !(3..=MAX_BUILD_DIMENSION).contains(&k) {
        return Err(Error::domain(format!("k = {k} outside 3..={MAX_BUILD_DIMENSION}")));
    }
    let max = (1usize << k) - 2;
    if deg < k as usize + 1 || deg > max {
        return Err(Error::domain(format!("degree {deg} outside [{}, {max}]", k + 1)));
    }
    let mut core: Vec<u64> = (0..k).map(|i| 1u64 << i).collect();
    core.push(0b11);
    let mut s = core.clone();
    let mut fresh = (1u64..1u64 << k).filter(|x| !core.contains(x));
    while s.len() < deg {
        s.push(fresh.next().expect("enough elements below 2^k"));
    }
    if s.iter().fold(0, |a, &x| a ^ x) == 0 {
        let dropped = s.pop().expect("non-core element when σ = 0");
        debug_assert!(!core.contains(&dropped));
        s.push(fresh.next().expect("an element outside S exists since deg ≤ 2^k − 2"));
    }
    let c = ConnectionSet::new(k, s)?;
    let g = c.build()?;
    Ok((c, g))
}

/// Exact Laplacian spectrum of `build(c)` checked against the Sylvester diagonalization.
pub fn spectrum_matches(c: &ConnectionSet) -> Result<bool> {
    let g = c.build()?;
    let h = sylvester(c.d())?;
    let l = g.laplacian();
    Ok(c.eigenvalues()
        .into_iter()
        .enumerate()
        .all(|(x, lam)| crate::spectral::column_eigenvalue(&l, &h, x) == Some(rational(lam as i64))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pst::pst_pairs;
    use crate::spectral::{certify, evolve_fidelity};
    use proptest::prelude::*;

    fn set(s: &str) -> ConnectionSet {
        s.parse().unwrap()
    }

    #[test]
    fn parse_forms() {
        let c = set("e1,e2,e3");
        assert_eq!(c.d(), 3);
        assert_eq!(c.bitstrings(), ["001", "010", "100"]);
        assert_eq!(set("011,101,110").elements(), &[3, 5, 6]);
        assert_eq!(ConnectionSet::parse_items("e1+e2,e3", Some(4)).unwrap().bitstrings(), ["0011", "0100"]);
        let text = c.to_text();
        assert!(text.starts_with("d=3\n"));
        assert_eq!(ConnectionSet::from_text(&text).unwrap(), c);
        assert!(ConnectionSet::new(2, [0]).is_err());
        assert!(ConnectionSet::new(2, [1, 1]).is_err());
        assert!(ConnectionSet::new(2, [4]).is_err());
        assert!(ConnectionSet::from_text("d=3\n01\n").is_err());
    }

    #[test]
    fn basis_builds_the_cube() {
        let g = set("e1,e2,e3").build().unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edge_count(), 12);
        for (i, j, _) in g.edges() {
            assert_eq!((i ^ j).count_ones(), 1);
        }
    }

    #[test]
    fn full_set_is_complete() {
        assert_eq!(ConnectionSet::everything(2).unwrap().build().unwrap(), WeightedGraph::complete(4));
    }

    #[test]
    fn k4_containing_set() {
        let c = set("001,010,100,011");
        let g = c.build().unwrap();
        assert!(g.degree_profile().is_regular());
        assert_eq!(g.degree_profile().degree(), Some(&rational(4)));
        assert!(g.is_connected());
        assert!(!g.is_bipartite());
        assert!(c.spans());
        assert!(!c.is_bipartite());
    }

    #[test]
    fn sigma_examples() {
        let r = pst_by_sigma(&set("e1,e2,e3"));
        assert_eq!(r.verdict, Verdict::Pst);
        assert_eq!(r.pairs, [(0, 7), (1, 6), (2, 5), (3, 4)]);
        assert_eq!(pst_by_sigma(&set("01,10,11")).verdict, Verdict::Periodic);
        let k2 = pst_by_sigma(&set("1"));
        assert_eq!(k2.pairs, [(0, 1)]);
    }

    #[test]
    fn code_weight_examples() {
        assert_eq!(code_weight_gcd(&set("011,101,110")).unwrap(), 2);
        // M = [1; 1] has row space {0, 1}
        assert_eq!(code_weights(&ConnectionSet::new(2, [3]).unwrap()).unwrap(), 1);
        assert!(code_weight_gcd(&ConnectionSet::new(2, [3]).unwrap()).is_err());
        // rows of M are 101 and 011, their sum 110
        assert_eq!(code_weight_gcd(&set("001,010,011")).unwrap(), 2);
        let c = set("0001,0010,0100,0111");
        assert_eq!(c.sigma(), 0);
        assert_eq!(code_weight_gcd(&c).unwrap(), brute_code_gcd(&c));
    }

    fn brute_code_gcd(c: &ConnectionSet) -> u64 {
        let mut g = 0u64;
        for y in 1u64..1 << c.d() {
            let w = c.elements().iter().filter(|&&x| (x & y).count_ones() % 2 == 1).count() as u64;
            if w != 0 {
                g = g.gcd(&w);
            }
        }
        g
    }

    #[test]
    fn decompose_round_trips() {
        let cube = set("e1,e2,e3");
        let d = decompose_standard(cube.build().unwrap().adjacency()).unwrap();
        assert_eq!(d.set, cube);
        assert!(!d.loops);
        let id = decompose_standard(&QMatrix::identity(8)).unwrap();
        assert!(id.set.is_empty());
        assert!(id.loops);
        let c4 = set("01,10");
        assert_eq!(decompose_standard(c4.build().unwrap().adjacency()).unwrap().set, c4);
    }

    #[test]
    fn decompose_rejects() {
        // the 8-cycle labelled around the ring is not cubelike in binary order
        let cyc = WeightedGraph::cycle(8).unwrap();
        assert!(matches!(
            decompose_standard(cyc.adjacency()),
            Err(Error::NotStandardDiagonalizable(_))
        ));
        let mut m = QMatrix::zeros(4);
        m.set(0, 0, rational(1));
        assert!(matches!(decompose_standard(&m), Err(Error::NotStandardDiagonalizable(_))));
        assert!(decompose_standard(&QMatrix::zeros(3)).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let connected = Filter { connected: Some(true), ..Filter::default() };
        assert_eq!(enumerate(2, connected.clone()).unwrap().count(), 4);
        assert_eq!(enumerate(3, Filter::default()).unwrap().count(), 128);
        let both = Filter { connected: Some(true), sigma_nonzero: Some(true), ..Filter::default() };
        let brute = (0u64..128)
            .map(|m| from_mask(3, m))
            .filter(|c| c.sigma() != 0 && c.build().unwrap().is_connected())
            .count();
        assert_eq!(enumerate(3, both.clone()).unwrap().count(), brute);
        assert_eq!(enumerate_parallel(3, &both).unwrap(), enumerate(3, both).unwrap().collect::<Vec<_>>());
        let cubic = Filter { degree: Some(3), ..Filter::default() };
        assert_eq!(enumerate(3, cubic.clone()).unwrap().count(), 35);
        assert_eq!(enumerate_parallel(3, &cubic).unwrap().len(), 35);
        assert_eq!(enumerate(2, Filter { degree: Some(0), ..Filter::default() }).unwrap().count(), 1);
        assert!(matches!(enumerate(6, Filter::default()), Err(Error::Capacity(_))));
        assert_eq!(enumerate(6, Filter { degree: Some(2), ..Filter::default() }).unwrap().count(), 63 * 62 / 2);
    }

    #[test]
    fn bipartite_matches_colouring_exhaustively() {
        for d in 1..=3 {
            for c in enumerate(d, Filter::default()).unwrap() {
                assert_eq!(c.is_bipartite(), c.build().unwrap().is_bipartite(), "{c}");
                assert_eq!(c.spans(), c.build().unwrap().is_connected(), "{c}");
            }
        }
    }

    #[test]
    fn odd_weight_sets_are_bipartite() {
        for c in enumerate(3, Filter::default()).unwrap() {
            if c.elements().iter().all(|x| x.count_ones() % 2 == 1) {
                assert!(c.is_bipartite());
            }
        }
        // odd weights are sufficient, not necessary: {01, 11} is a path, hence bipartite
        let c = set("01,11");
        assert!(c.is_bipartite());
        assert!(c.build().unwrap().is_bipartite());
    }

    #[test]
    fn build_is_sylvester_diagonalizable_d3() {
        let h = sylvester(3).unwrap();
        for c in enumerate(3, Filter::default()).unwrap() {
            assert!(diagonalizes(&c.build().unwrap().laplacian(), &h).unwrap());
            assert!(spectrum_matches(&c).unwrap());
        }
    }

    #[test]
    fn regular_family_properties() {
        for k in 3..=5u32 {
            for deg in k as usize + 1..=(1 << k) - 2 {
                let (c, g) = regular_pst_family(k, deg).unwrap();
                assert_eq!(c.len(), deg);
                assert_ne!(c.sigma(), 0);
                assert!(g.is_connected());
                assert!(!g.is_bipartite());
                assert_eq!(g.degree_profile().degree(), Some(&rational(deg as i64)));
                if k <= 4 {
                    let report = pst_pairs(&certify(&g, &sylvester(k).unwrap()).unwrap()).unwrap();
                    assert_eq!(report.verdict, Verdict::Pst);
                    assert_eq!(report.pairs, pst_by_sigma(&c).pairs);
                }
            }
        }
        let (c, _) = regular_pst_family(3, 4).unwrap();
        assert_eq!(c, set("001,010,100,011"));
        assert!(regular_pst_family(3, 3).is_err());
        assert!(regular_pst_family(3, 7).is_err());
        assert!(regular_pst_family(2, 3).is_err());
    }

    #[test]
    fn sigma_pairs_pass_oracle() {
        let c = set("e1,e2,e3,e1+e2");
        let g = c.build().unwrap();
        for (j, k) in pst_by_sigma(&c).pairs {
            assert!(evolve_fidelity(&g, std::f64::consts::FRAC_PI_2, j, k).unwrap() > 1.0 - 1e-9);
        }
    }

    proptest! {
        #[test]
        fn decompose_inverts_build(d in 1u32..=4, seed in any::<u64>()) {
            let slots = (1u64 << d) - 1;
            let mask = seed & ((1u64 << slots) - 1);
            let c = from_mask(d, mask);
            let g = c.build().unwrap();
            let back = decompose_standard(g.adjacency()).unwrap();
            prop_assert_eq!(back.set.build().unwrap(), g);
            prop_assert!(!back.loops);
        }

        #[test]
        fn code_gcd_matches_functional_sweep(mask in 0u64..(1 << 15)) {
            let c = from_mask(4, mask);
            prop_assert_eq!(code_weights(&c).unwrap(), brute_code_gcd(&c));
        }
    }
}
