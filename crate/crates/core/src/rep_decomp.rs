//! Weight-based representation theory for sp(n) and so(m) at small rank:
//! Weyl dimensions, Freudenthal multiplicities, tensor product decomposition,
//! the V-isotypic projector on S²V⊗V and the so(n+1) dimension audit.
//!
//! Weights are integer vectors in ε-coordinates. For so(m) the coordinates
//! are doubled so that spin weights stay integral.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use legpath_symbolic::{BigInt, Matrix, Q};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::report_io::Check;

pub type Weight = Vec<i64>;
/// Weight multiplicities.
pub type Character = BTreeMap<Weight, u64>;

/// Rank bound for multiplicity enumeration and decomposition.
pub const MAX_DECOMPOSE_RANK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraId {
    /// sp(n), rank n, standard representation of dimension 2n.
    Symplectic(usize),
    /// so(m), m >= 3.
    Orthogonal(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    C,
    B,
    D,
}

impl AlgebraId {
    pub fn validate(self) -> Result<()> {
        match self {
            AlgebraId::Symplectic(n) if n >= 1 => Ok(()),
            AlgebraId::Orthogonal(m) if m >= 3 => Ok(()),
            _ => Err(CoreError::Precondition(format!("invalid algebra {self}"))),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            AlgebraId::Symplectic(n) => n,
            AlgebraId::Orthogonal(m) => m / 2,
        }
    }

    fn kind(self) -> Kind {
        match self {
            AlgebraId::Symplectic(_) => Kind::C,
            AlgebraId::Orthogonal(m) if m % 2 == 1 => Kind::B,
            AlgebraId::Orthogonal(_) => Kind::D,
        }
    }

    /// Positive roots in (doubled, for so) ε-coordinates.
    pub fn positive_roots(self) -> Vec<Weight> {
        let r = self.rank();
        let s = if self.kind() == Kind::C { 1 } else { 2 };
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let mut a = vec![0; r];
                a[i] = s;
                a[j] = -s;
                out.push(a.clone());
                a[j] = s;
                out.push(a);
            }
        }
        if self.kind() != Kind::D {
            for i in 0..r {
                let mut a = vec![0; r];
                a[i] = 2;
                out.push(a);
            }
        }
        out
    }

    pub fn simple_roots(self) -> Vec<Weight> {
        let r = self.rank();
        let s = if self.kind() == Kind::C { 1 } else { 2 };
        let mut out = Vec::new();
        for i in 0..r.saturating_sub(1) {
            let mut a = vec![0; r];
            a[i] = s;
            a[i + 1] = -s;
            out.push(a);
        }
        let mut last = vec![0; r];
        match self.kind() {
            Kind::C | Kind::B => last[r - 1] = 2,
            Kind::D => {
                last[r - 2] = 2;
                last[r - 1] = 2;
            }
        }
        out.push(last);
        out
    }

    /// Half the sum of the positive roots.
    pub fn rho(self) -> Weight {
        let r = self.rank() as i64;
        match self.kind() {
            Kind::C => (0..r).map(|i| r - i).collect(),
            Kind::B => (0..r).map(|i| 2 * (r - i) - 1).collect(),
            Kind::D => (0..r).map(|i| 2 * (r - 1 - i)).collect(),
        }
    }

    fn dominant(self, w: &[i64]) -> bool {
        let r = w.len();
        let mono = (0..r.saturating_sub(1)).all(|i| w[i] >= w[i + 1]);
        match self.kind() {
            Kind::C | Kind::B => mono && w[r - 1] >= 0,
            Kind::D => (0..r.saturating_sub(2)).all(|i| w[i] >= w[i + 1]) && w[r - 2] >= w[r - 1].abs(),
        }
    }

    /// The dominant Weyl conjugate.
    pub fn dominant_conjugate(self, w: &[i64]) -> Weight {
        let mut v: Weight = w.iter().map(|x| x.abs()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        if self.kind() == Kind::D {
            let negatives = w.iter().filter(|&&x| x < 0).count();
            if negatives % 2 == 1 && w.iter().all(|&x| x != 0) {
                let r = v.len();
                v[r - 1] = -v[r - 1];
            }
        }
        v
    }

    /// The Weyl orbit of a weight: signed permutations, with an even number
    /// of sign changes for type D.
    pub fn orbit(self, w: &[i64]) -> BTreeSet<Weight> {
        let mut perms = BTreeSet::new();
        permutations(&mut w.to_vec(), 0, &mut perms);
        let r = w.len();
        let mut out = BTreeSet::new();
        for p in perms {
            for mask in 0u32..(1 << r) {
                let v: Weight = (0..r).map(|i| if mask >> i & 1 == 1 { -p[i] } else { p[i] }).collect();
                if self.kind() == Kind::D && (mask.count_ones() as usize) % 2 == 1 && p.iter().all(|&x| x != 0) {
                    continue;
                }
                out.insert(v);
            }
        }
        out
    }
}

fn permutations(v: &mut Weight, k: usize, out: &mut BTreeSet<Weight>) {
    if k == v.len() {
        out.insert(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::Symplectic(n) => write!(f, "sp({n})"),
            AlgebraId::Orthogonal(m) => write!(f, "so({m})"),
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Highest weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepLabel {
    pub algebra: AlgebraId,
    pub coords: Vec<u32>,
}

impl IrrepLabel {
    pub fn new(algebra: AlgebraId, coords: Vec<u32>) -> Result<Self> {
        algebra.validate()?;
        if coords.len() != algebra.rank() {
            return Err(CoreError::Precondition(format!(
                "{algebra} labels have {} coordinates, got {}",
                algebra.rank(),
                coords.len()
            )));
        }
        Ok(IrrepLabel { algebra, coords })
    }

    pub fn trivial(algebra: AlgebraId) -> Result<Self> {
        Self::new(algebra, vec![0; algebra.rank()])
    }

    /// `a ω_k` with 1-based `k`.
    pub fn fundamental(algebra: AlgebraId, k: usize, a: u32) -> Result<Self> {
        let mut c = vec![0; algebra.rank()];
        if k == 0 || k > c.len() {
            return Err(CoreError::Precondition(format!("no fundamental weight {k} for {algebra}")));
        }
        c[k - 1] = a;
        Self::new(algebra, c)
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&a| a == 0)
    }

    /// Whether the representation descends to the group: always for sp, and
    /// for so(m) only without spin weights.
    pub fn is_group_integral(&self) -> bool {
        let a = &self.coords;
        let r = a.len();
        match self.algebra.kind() {
            Kind::C => true,
            Kind::B => a[r - 1] % 2 == 0,
            Kind::D => (a[r - 2] + a[r - 1]) % 2 == 0,
        }
    }

    /// Complex type: a non-self-conjugate so(4k+2) irrep.
    pub fn is_complex_type(&self) -> bool {
        let r = self.coords.len();
        self.algebra.kind() == Kind::D && r % 2 == 1 && self.coords[r - 2] != self.coords[r - 1]
    }

    /// Highest weight in ε-coordinates.
    pub fn weight(&self) -> Weight {
        let a: Vec<i64> = self.coords.iter().map(|&x| x as i64).collect();
        let r = a.len();
        match self.algebra.kind() {
            Kind::C => (0..r).map(|i| a[i..].iter().sum()).collect(),
            Kind::B => (0..r).map(|i| 2 * a[i..r - 1].iter().sum::<i64>() + a[r - 1]).collect(),
            Kind::D => (0..r)
                .map(|i| {
                    if i == r - 1 {
                        a[r - 1] - a[r - 2]
                    } else {
                        2 * a[i..r - 2].iter().sum::<i64>() + a[r - 2] + a[r - 1]
                    }
                })
                .collect(),
        }
    }

    /// Inverse of [`IrrepLabel::weight`] for dominant integral weights.
    pub fn from_weight(algebra: AlgebraId, w: &[i64]) -> Result<Self> {
        let r = algebra.rank();
        let bad = || CoreError::Precondition(format!("{w:?} is not a dominant integral weight of {algebra}"));
        if w.len() != r || !algebra.dominant(w) {
            return Err(bad());
        }
        let halve = |x: i64| if x % 2 == 0 { Ok(x / 2) } else { Err(bad()) };
        let mut c = Vec::with_capacity(r);
        match algebra.kind() {
            Kind::C => {
                for i in 0..r {
                    c.push(w[i] - w.get(i + 1).copied().unwrap_or(0));
                }
            }
            Kind::B => {
                for i in 0..r - 1 {
                    c.push(halve(w[i] - w[i + 1])?);
                }
                c.push(w[r - 1]);
            }
            Kind::D => {
                for i in 0..r - 2 {
                    c.push(halve(w[i] - w[i + 1])?);
                }
                c.push(halve(w[r - 2] - w[r - 1])?);
                c.push(halve(w[r - 2] + w[r - 1])?);
            }
        }
        Self::new(algebra, c.into_iter().map(|x| x as u32).collect())
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(u32::to_string).collect();
        write!(f, "{}[{}]", self.algebra, c.join(","))
    }
}

pub fn weyl_dimension(label: &IrrepLabel) -> Result<u64> {
    label.algebra.validate()?;
    let rho = label.algebra.rho();
    let lr: Weight = label.weight().iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for a in label.algebra.positive_roots() {
        num *= BigInt::from(dot(&lr, &a));
        den *= BigInt::from(dot(&rho, &a));
    }
    (num / den).to_u64().ok_or_else(|| CoreError::BoundExceeded(format!("dimension of {label} exceeds u64")))
}

fn check_rank(algebra: AlgebraId) -> Result<()> {
    if algebra.rank() > MAX_DECOMPOSE_RANK {
        return Err(CoreError::BoundExceeded(format!(
            "{algebra} has rank {} > {MAX_DECOMPOSE_RANK}",
            algebra.rank()
        )));
    }
    Ok(())
}

/// Height of `λ - μ` in simple roots, or `None` outside the positive root cone.
fn root_height(inverse: &Matrix<Q>, diff: &[i64]) -> Option<i64> {
    let v: Vec<Q> = diff.iter().map(|&x| Q::from_integer(x.into())).collect();
    let c = inverse.mul_vec(&v);
    let mut h = 0;
    for x in c {
        if !x.is_integer() || x < Q::zero() {
            return None;
        }
        h += x.to_integer().to_i64()?;
    }
    Some(h)
}

fn nonincreasing(r: usize, max: i64, prefix: &mut Weight, out: &mut Vec<Weight>) {
    if prefix.len() == r {
        out.push(prefix.clone());
        return;
    }
    let top = prefix.last().copied().unwrap_or(max);
    for x in (0..=top).rev() {
        prefix.push(x);
        nonincreasing(r, max, prefix, out);
        prefix.pop();
    }
}

/// Multiplicities of the dominant weights, by Freudenthal's formula.
pub fn dominant_multiplicities(label: &IrrepLabel) -> Result<BTreeMap<Weight, u64>> {
    let alg = label.algebra;
    alg.validate()?;
    check_rank(alg)?;
    let r = alg.rank();
    let lambda = label.weight();
    let simple = alg.simple_roots();
    let sm = Matrix::from_fn(r, r, |i, j| Q::from_integer(simple[j][i].into()));
    let inv = sm.inverse().expect("simple roots are independent");

    let mut candidates = Vec::new();
    nonincreasing(r, lambda[0].max(0), &mut Vec::new(), &mut candidates);
    if alg.kind() == Kind::D {
        let extra: Vec<Weight> = candidates
            .iter()
            .filter(|w| w[r - 1] != 0)
            .map(|w| {
                let mut v = w.clone();
                v[r - 1] = -v[r - 1];
                v
            })
            .collect();
        candidates.extend(extra);
    }
    let mut dominant: Vec<(i64, Weight)> = candidates
        .into_iter()
        .filter(|w| alg.dominant(w))
        .filter_map(|w| {
            let d: Weight = lambda.iter().zip(&w).map(|(a, b)| a - b).collect();
            root_height(&inv, &d).map(|h| (h, w))
        })
        .collect();
    dominant.sort();

    let rho = alg.rho();
    let roots = alg.positive_roots();
    let lr: Weight = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let norm_lr = dot(&lr, &lr);
    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    for (h, mu) in dominant {
        if h == 0 {
            mult.insert(mu, 1);
            continue;
        }
        let mut acc: i64 = 0;
        for a in &roots {
            for k in 1.. {
                let nu: Weight = mu.iter().zip(a).map(|(x, y)| x + k * y).collect();
                let m = mult.get(&alg.dominant_conjugate(&nu)).copied().unwrap_or(0);
                if m == 0 {
                    break;
                }
                acc += m as i64 * dot(&nu, a);
            }
        }
        let mr: Weight = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let denom = norm_lr - dot(&mr, &mr);
        debug_assert!(denom > 0);
        let m = 2 * acc / denom;
        debug_assert_eq!(2 * acc % denom, 0);
        if m > 0 {
            mult.insert(mu, m as u64);
        }
    }
    Ok(mult)
}

/// The full character of an irreducible representation.
pub fn character(label: &IrrepLabel) -> Result<Character> {
    let mut ch = Character::new();
    for (mu, m) in dominant_multiplicities(label)? {
        for w in label.algebra.orbit(&mu) {
            ch.insert(w, m);
        }
    }
    Ok(ch)
}

pub fn character_dim(ch: &Character) -> u64 {
    ch.values().sum()
}

pub fn tensor_character(a: &Character, b: &Character) -> Character {
    let mut out = Character::new();
    for (wa, ma) in a {
        for (wb, mb) in b {
            let w: Weight = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
            *out.entry(w).or_insert(0) += ma * mb;
        }
    }
    out
}

fn expand(ch: &Character) -> Vec<&Weight> {
    ch.iter().flat_map(|(w, &m)| std::iter::repeat(w).take(m as usize)).collect()
}

fn add_weights(ws: &[&Weight]) -> Weight {
    let mut out = vec![0; ws[0].len()];
    for w in ws {
        for (o, x) in out.iter_mut().zip(w.iter()) {
            *o += x;
        }
    }
    out
}

pub fn wedge2_character(ch: &Character) -> Character {
    let ws = expand(ch);
    let mut out = Character::new();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            *out.entry(add_weights(&[ws[i], ws[j]])).or_insert(0) += 1;
        }
    }
    out
}

pub fn sym_power_character(ch: &Character, k: usize) -> Character {
    fn rec<'a>(ws: &[&'a Weight], start: usize, k: usize, cur: &mut Vec<&'a Weight>, out: &mut Character) {
        if k == 0 {
            *out.entry(add_weights(cur)).or_insert(0) += 1;
            return;
        }
        for i in start..ws.len() {
            cur.push(ws[i]);
            rec(ws, i, k - 1, cur, out);
            cur.pop();
        }
    }
    let ws = expand(ch);
    let mut out = Character::new();
    if k == 0 {
        out.insert(vec![0; ch.keys().next().map_or(0, Vec::len)], 1);
        return out;
    }
    rec(&ws, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible summands with multiplicity, by iterated extraction of the
/// lexicographically largest weight.
pub fn decompose_character(algebra: AlgebraId, ch: &Character) -> Result<Vec<(IrrepLabel, u64)>> {
    check_rank(algebra)?;
    let mut rest: BTreeMap<Weight, i64> = ch.iter().map(|(w, &m)| (w.clone(), m as i64)).collect();
    let mut out = Vec::new();
    loop {
        rest.retain(|_, m| *m != 0);
        let Some((top, &m)) = rest.iter().next_back() else { break };
        if m < 0 {
            return Err(CoreError::Precondition("not a character: negative multiplicity".into()));
        }
        let label = IrrepLabel::from_weight(algebra, top)?;
        for (w, k) in character(&label)? {
            *rest.entry(w).or_insert(0) -= m * k as i64;
        }
        out.push((label, m as u64));
    }
    out.sort_by(|a, b| b.0.weight().cmp(&a.0.weight()));
    Ok(out)
}

pub fn tensor_decompose(a: &IrrepLabel, b: &IrrepLabel) -> Result<Vec<(IrrepLabel, u64)>> {
    if a.algebra != b.algebra {
        return Err(CoreError::Precondition(format!("{} and {} are different algebras", a.algebra, b.algebra)));
    }
    decompose_character(a.algebra, &tensor_character(&character(a)?, &character(b)?))
}

fn ledger(total: u64, parts: &[(IrrepLabel, u64)]) -> Result<(u64, String)> {
    let mut sum = 0;
    let mut terms = Vec::new();
    for (l, m) in parts {
        let d = weyl_dimension(l)?;
        sum += d * m;
        terms.push(if *m == 1 { d.to_string() } else { format!("{m}*{d}") });
    }
    Ok((sum, format!("{total} = {}", terms.join("+"))))
}

/// Outcome of one decomposition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionLine {
    pub name: String,
    pub computed: Vec<(IrrepLabel, u64)>,
    pub expected: Vec<IrrepLabel>,
    /// e.g. `50 = 35+10+5`.
    pub ledger: String,
}

impl DecompositionLine {
    pub fn check(&self) -> Check {
        let mut got: Vec<IrrepLabel> =
            self.computed.iter().flat_map(|(l, m)| std::iter::repeat(l.clone()).take(*m as usize)).collect();
        let mut want = self.expected.clone();
        got.sort();
        want.sort();
        let names = |v: &[IrrepLabel]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ");
        Check::from_bool(&self.name, got == want, || format!("computed {}; expected {}", names(&got), names(&want)))
    }
}

fn label(alg: AlgebraId, coords: &[u32]) -> IrrepLabel {
    let mut c = coords.to_vec();
    c.resize(alg.rank(), 0);
    IrrepLabel::new(alg, c).expect("valid label")
}

/// The three decompositions used for the curvature module of sp(n):
/// `⋀²V`, `S²V ⊗ Γ_{010..0}` and `S²V ⊗ V`.
pub fn verify_structure_decompositions(n: usize) -> Result<Vec<DecompositionLine>> {
    if !(2..=MAX_DECOMPOSE_RANK).contains(&n) {
        return Err(CoreError::BoundExceeded(format!("n = {n} outside 2..={MAX_DECOMPOSE_RANK}")));
    }
    let alg = AlgebraId::Symplectic(n);
    let v = character(&label(alg, &[1]))?;
    let s2 = label(alg, &[2]);
    let g010 = label(alg, &[0, 1]);
    let mut lines = Vec::new();

    let w2 = wedge2_character(&v);
    let parts = decompose_character(alg, &w2)?;
    lines.push(DecompositionLine {
        name: "wedge2_V".into(),
        ledger: ledger(character_dim(&w2), &parts)?.1,
        computed: parts,
        expected: vec![g010.clone(), label(alg, &[])],
    });

    let parts = tensor_decompose(&s2, &g010)?;
    let expected = if n == 2 {
        vec![label(alg, &[2, 1]), label(alg, &[2, 0]), label(alg, &[0, 1])]
    } else {
        vec![label(alg, &[2, 1]), label(alg, &[1, 0, 1]), label(alg, &[2]), label(alg, &[0, 1])]
    };
    lines.push(DecompositionLine {
        name: "S2V_tensor_Gamma010".into(),
        ledger: ledger(weyl_dimension(&s2)? * weyl_dimension(&g010)?, &parts)?.1,
        computed: parts,
        expected,
    });

    let parts = tensor_decompose(&s2, &label(alg, &[1]))?;
    lines.push(DecompositionLine {
        name: "S2V_tensor_V".into(),
        ledger: ledger(weyl_dimension(&s2)? * 2 * n as u64, &parts)?.1,
        computed: parts,
        expected: vec![label(alg, &[3]), label(alg, &[1]), label(alg, &[1, 1])],
    });
    Ok(lines)
}

/// The V-isotypic projector on S²V⊗V in the basis `e_a e_b ⊗ e_c`, `a <= b`,
/// built as `E∘C / (-(2n+1))` from the trace `C(T)^a = Σ T^{abc} J_bc` and
/// the embedding `E(v)^{abc} = v^a K^{bc} + v^b K^{ac}`, `K = -J`.
#[derive(Clone, Debug, PartialEq)]
pub struct VProjector {
    pub n: usize,
    pub matrix: Matrix<Q>,
}

/// `J = (0, I; -I, 0)` on V.
pub fn symplectic_j(n: usize) -> Matrix<Q> {
    Matrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            Q::one()
        } else if i >= n && j + n == i {
            -Q::one()
        } else {
            Q::zero()
        }
    })
}

/// Index helpers for S²V⊗V with `dim V = d`.
pub struct S2VBasis {
    d: usize,
    pairs: Vec<(usize, usize)>,
}

impl S2VBasis {
    pub fn new(d: usize) -> Self {
        let pairs = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
        S2VBasis { d, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len() * self.d
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, a: usize, b: usize, c: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let p = self.pairs.iter().position(|&x| x == (a, b)).expect("pair");
        p * self.d + c
    }

    /// Full tensor `T^{abc}` (symmetric in ab) from coordinates.
    pub fn to_full(&self, v: &[Q]) -> Vec<Q> {
        let d = self.d;
        let mut out = vec![Q::zero(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    out[(a * d + b) * d + c] = v[self.index(a, b, c)].clone();
                }
            }
        }
        out
    }

    pub fn from_full(&self, t: &[Q]) -> Vec<Q> {
        let d = self.d;
        let mut out = vec![Q::zero(); self.len()];
        for (p, &(a, b)) in self.pairs.iter().enumerate() {
            for c in 0..d {
                out[p * d + c] = t[(a * d + b) * d + c].clone();
            }
        }
        out
    }
}

impl VProjector {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_DECOMPOSE_RANK).contains(&n) {
            return Err(CoreError::BoundExceeded(format!("n = {n} outside 1..={MAX_DECOMPOSE_RANK}")));
        }
        let d = 2 * n;
        let j = symplectic_j(n);
        let basis = S2VBasis::new(d);
        // C: S²V⊗V -> V
        let trace = Matrix::from_fn(d, basis.len(), |a, col| {
            let p = col / d;
            let c = col % d;
            let (x, y) = basis.pairs[p];
            // coordinate (x<=y, c) stands for T^{xyc} = T^{yxc}
            let mut s = Q::zero();
            if x == a {
                s += j[(y, c)].clone();
            }
            if y == a && x != y {
                s += j[(x, c)].clone();
            }
            s
        });
        let embed = Matrix::from_fn(basis.len(), d, |row, v| {
            let p = row / d;
            let c = row % d;
            let (a, b) = basis.pairs[p];
            let k = |x: usize, y: usize| -j[(x, y)].clone();
            let mut s = Q::zero();
            if a == v {
                s += k(b, c);
            }
            if b == v {
                s += k(a, c);
            }
            s
        });
        let scale = Q::from_integer(BigInt::from(-(2 * n as i64 + 1))).recip();
        Ok(VProjector { n, matrix: embed.mul(&trace).scale(&scale) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(v)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_idempotent(&self) -> bool {
        self.matrix.mul(&self.matrix) == self.matrix
    }

    /// Action of `X ∈ gl(V)` on S²V⊗V.
    pub fn action_matrix(&self, x: &Matrix<Q>) -> Matrix<Q> {
        let d = 2 * self.n;
        let basis = S2VBasis::new(d);
        let cols: Vec<Vec<Q>> = (0..basis.len())
            .map(|k| {
                let mut e = vec![Q::zero(); basis.len()];
                e[k] = Q::one();
                let t = basis.to_full(&e);
                let mut out = vec![Q::zero(); d * d * d];
                for a in 0..d {
                    for b in 0..d {
                        for c in 0..d {
                            let mut s = Q::zero();
                            for e2 in 0..d {
                                s += x[(a, e2)].clone() * &t[(e2 * d + b) * d + c];
                                s += x[(b, e2)].clone() * &t[(a * d + e2) * d + c];
                                s += x[(c, e2)].clone() * &t[(a * d + b) * d + e2];
                            }
                            out[(a * d + b) * d + c] = s;
                        }
                    }
                }
                basis.from_full(&out)
            })
            .collect();
        Matrix::from_fn(basis.len(), basis.len(), |i, j| cols[j][i].clone())
    }

    /// `[P, ρ(X)] = 0`.
    pub fn commutes_with(&self, x: &Matrix<Q>) -> bool {
        let a = self.action_matrix(x);
        self.matrix.mul(&a) == a.mul(&self.matrix)
    }
}

/// `J S` with `S` symmetric lies in sp(n).
pub fn sp_element(s: &Matrix<Q>) -> Matrix<Q> {
    symplectic_j(s.rows() / 2).mul(s)
}

/// Real SO(n+1) irreps of small dimension and the inequalities used to rule
/// out an injective SO(n+1) -> U(n).
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaAudit {
    pub n: usize,
    pub algebra: AlgebraId,
    pub bound: u64,
    /// Nontrivial group-integral irreps with real dimension `<= bound`.
    pub irreps: Vec<(IrrepLabel, u64)>,
    /// Sorted distinct real dimensions.
    pub dims: Vec<u64>,
    pub checks: Vec<Check>,
}

pub const MAX_LEMMA_N: usize = 6;

pub fn so_minimal_dims(n: usize) -> Result<LemmaAudit> {
    if !(2..=MAX_LEMMA_N).contains(&n) {
        return Err(CoreError::BoundExceeded(format!("n = {n} outside 2..={MAX_LEMMA_N}")));
    }
    let alg = AlgebraId::Orthogonal(n + 1);
    let r = alg.rank();
    let bound = (n * (n + 1)) as u64;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([vec![0u32; r]]);
    let mut irreps = Vec::new();
    while let Some(c) = queue.pop_front() {
        if !seen.insert(c.clone()) {
            continue;
        }
        let l = IrrepLabel::new(alg, c.clone())?;
        let d = weyl_dimension(&l)?;
        if d > bound {
            continue;
        }
        for k in 0..r {
            let mut next = c.clone();
            next[k] += 1;
            queue.push_back(next);
        }
        if l.is_trivial() || !l.is_group_integral() {
            continue;
        }
        let real = if l.is_complex_type() { 2 * d } else { d };
        if real <= bound {
            irreps.push((l, real));
        }
    }
    irreps.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    let dims: Vec<u64> = irreps.iter().map(|x| x.1).collect::<BTreeSet<_>>().into_iter().collect();

    let n64 = n as u64;
    let smallest = dims.first().copied().unwrap_or(0);
    let next = dims.get(1).copied().unwrap_or(u64::MAX);
    let half = n64 * (n64 + 1) / 2;
    let complement = 2 * n64 - (n64 + 1);
    let checks = vec![
        Check::from_bool("smallest_is_vector", smallest == n64 + 1, || format!("smallest = {smallest}, n+1 = {}", n64 + 1)),
        Check::from_bool("next_at_least_half_n_n_plus_1", next >= half, || format!("next = {next} < {half}")),
        Check::from_bool("next_exceeds_2n", next > 2 * n64, || format!("next = {next} <= 2n = {}", 2 * n64)),
        Check::from_bool("complement_below_n_plus_1", complement < n64 + 1, || {
            format!("2n-(n+1) = {complement} >= {}", n64 + 1)
        }),
    ];
    Ok(LemmaAudit { n, algebra: alg, bound, irreps, dims, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, c: &[u32]) -> IrrepLabel {
        label(AlgebraId::Symplectic(n), c)
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dimension(&sp(2, &[1, 0])).unwrap(), 4);
        assert_eq!(weyl_dimension(&sp(2, &[0, 1])).unwrap(), 5);
        assert_eq!(weyl_dimension(&sp(2, &[2, 1])).unwrap(), 35);
        assert_eq!(weyl_dimension(&sp(3, &[1, 1, 0])).unwrap(), 64);
        // adjoint of so(5): ε1+ε2 = 2ω2, dimension ½·4·5
        assert_eq!(weyl_dimension(&label(AlgebraId::Orthogonal(5), &[0, 2])).unwrap(), 10);
        assert_eq!(weyl_dimension(&label(AlgebraId::Orthogonal(5), &[1, 0])).unwrap(), 5);
        assert_eq!(weyl_dimension(&label(AlgebraId::Orthogonal(5), &[0, 1])).unwrap(), 4);
        assert_eq!(weyl_dimension(&label(AlgebraId::Orthogonal(6), &[0, 1, 1])).unwrap(), 15);
        assert_eq!(weyl_dimension(&label(AlgebraId::Orthogonal(4), &[1, 1])).unwrap(), 4);
    }

    #[test]
    fn weights_round_trip() {
        for alg in [AlgebraId::Symplectic(3), AlgebraId::Orthogonal(7), AlgebraId::Orthogonal(6)] {
            for c in [[1, 0, 0], [0, 2, 1], [1, 1, 3]] {
                let l = label(alg, &c);
                assert_eq!(IrrepLabel::from_weight(alg, &l.weight()).unwrap(), l);
            }
        }
    }

    #[test]
    fn characters_have_weyl_dimension() {
        for l in [sp(2, &[2, 1]), sp(3, &[1, 0, 1]), label(AlgebraId::Orthogonal(7), &[0, 0, 1])] {
            assert_eq!(character_dim(&character(&l).unwrap()), weyl_dimension(&l).unwrap(), "{l}");
        }
        // Γ_01 of sp(2) has the zero weight once.
        assert_eq!(dominant_multiplicities(&sp(2, &[0, 1])).unwrap().get(&vec![0, 0]), Some(&1));
    }

    #[test]
    fn structure_decompositions() {
        let lines = verify_structure_decompositions(2).unwrap();
        let ledgers: Vec<&str> = lines.iter().map(|l| l.ledger.as_str()).collect();
        assert_eq!(ledgers, ["6 = 5+1", "50 = 35+10+5", "40 = 20+16+4"]);
        assert!(lines.iter().all(|l| l.check().pass));
        let lines = verify_structure_decompositions(3).unwrap();
        let ledgers: Vec<&str> = lines.iter().map(|l| l.ledger.as_str()).collect();
        assert_eq!(ledgers, ["15 = 14+1", "294 = 189+70+21+14", "126 = 56+64+6"]);
        assert!(lines.iter().all(|l| l.check().pass));
    }

    #[test]
    fn trivial_factor() {
        let v = sp(2, &[1, 0]);
        let t = sp(2, &[0, 0]);
        assert_eq!(tensor_decompose(&v, &t).unwrap(), vec![(v, 1)]);
    }

    #[test]
    fn projector() {
        let p = VProjector::new(2).unwrap();
        assert_eq!(p.dim(), 40);
        assert_eq!(p.rank(), 4);
        assert!(p.is_idempotent());
        let s = Matrix::from_fn(4, 4, |i, j| Q::from_integer(BigInt::from((i * j + i + j) as i64)));
        assert!(p.commutes_with(&sp_element(&s)));
        // a gl(V) element outside sp does not commute
        let mut x = Matrix::<Q>::zeros(4, 4);
        x[(0, 1)] = Q::one();
        assert!(!p.commutes_with(&x));
    }

    #[test]
    fn lemma_audit() {
        let a = so_minimal_dims(4).unwrap();
        assert_eq!(a.dims, vec![5, 10, 14]);
        assert!(a.checks.iter().all(|c| c.pass));
        assert_eq!(so_minimal_dims(5).unwrap().dims, vec![6, 15, 20]);
        assert_eq!(so_minimal_dims(6).unwrap().dims, vec![7, 21, 27, 35]);
        let a3 = so_minimal_dims(3).unwrap();
        assert_eq!(a3.dims[0], 3);
        assert!(!a3.checks[0].pass);
        assert!(matches!(so_minimal_dims(7), Err(CoreError::BoundExceeded(_))));
    }
}
