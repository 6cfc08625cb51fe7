//! One- and two-body matrix elements between states of given permutational
//! symmetry, evaluated through fractional-parentage tables, plus brute-force
//! word-space evaluations of the same quantities.
//!
//! Orbitals are the slots 1..n; every particle sits in a different orbital.
//! A one-body operator can only keep a particle in its orbital inside this
//! space, so only the diagonal m1(α,α) contributes. A two-body operator on
//! the orbital pair (γ<δ) can keep or exchange the two particles there; its
//! pair channels are S = (ab+ba)/√2 and A = (ab−ba)/√2, where a is the lower
//! label and sits in orbital γ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::builder::{parent, CfpTable, Engine, ReductionTask};
use crate::characters::inner_cg;
use crate::combinatorics::{binomial, conjugate, Partition};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, q, Radical, RadicalSum, Rational};
use crate::wordspace::{inner, Accumulator, Word, WordVector};

pub type MeMatrix = Vec<Vec<RadicalSum>>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Channel {
    S,
    A,
}

impl Channel {
    fn parse(s: &str) -> Option<Channel> {
        match s.trim() {
            "S" => Some(Channel::S),
            "A" => Some(Channel::A),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OneBodySpec {
    pub m1: BTreeMap<(usize, usize), Rational>,
}

impl OneBodySpec {
    pub fn identity(n: usize) -> Self {
        OneBodySpec { m1: (1..=n).map(|a| ((a, a), Rational::one())).collect() }
    }

    pub fn get(&self, a: usize, b: usize) -> Rational {
        self.m1.get(&(a, b)).or_else(|| self.m1.get(&(b, a))).cloned().unwrap_or_else(Rational::zero)
    }

    /// Σ_α m1(α,α) over orbitals 1..n.
    pub fn trace(&self, n: usize) -> Rational {
        (1..=n).map(|a| self.get(a, a)).sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TwoBodySpec {
    pub m2: BTreeMap<(Channel, Channel, usize, usize, usize, usize), Rational>,
}

impl TwoBodySpec {
    pub fn get(&self, p: Channel, q: Channel, a: usize, b: usize, c: usize, d: usize) -> Rational {
        self.m2.get(&(p, q, a, b, c, d)).cloned().unwrap_or_else(Rational::zero)
    }

    /// The four channel values m^{pq}(γ,δ,γ,δ) that act inside the word space.
    pub fn pair_block(&self, g: usize, d: usize) -> [[Rational; 2]; 2] {
        use Channel::*;
        [
            [self.get(S, S, g, d, g, d), self.get(S, A, g, d, g, d)],
            [self.get(A, S, g, d, g, d), self.get(A, A, g, d, g, d)],
        ]
    }

    /// Counts symmetric pairs: m^{SS}(γ,δ,γ,δ) = 1 for all γ<δ ≤ n.
    pub fn symmetric_pair_counter(n: usize) -> Self {
        let mut m2 = BTreeMap::new();
        for g in 1..=n {
            for d in g + 1..=n {
                m2.insert((Channel::S, Channel::S, g, d, g, d), Rational::one());
            }
        }
        TwoBodySpec { m2 }
    }

    /// m^{pq}(αβγδ) = m^{qp}(γδαβ) for every stored entry.
    pub fn is_hermitian(&self) -> bool {
        self.m2.iter().all(|(&(p, q, a, b, c, d), v)| &self.get(q, p, c, d, a, b) == v)
    }

    pub fn has_channel_mixing(&self) -> bool {
        self.m2.iter().any(|(&(p, q, ..), v)| p != q && !v.is_zero())
    }
}

fn json_err(msg: impl Into<String>) -> Error {
    Error::parse(0, msg)
}

fn parse_value(v: &serde_json::Value) -> Result<Rational> {
    let s = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        _ => return Err(json_err("spec values must be rational strings")),
    };
    parse_rational(&s).ok_or_else(|| json_err(format!("bad rational {s:?}")))
}

fn parse_indices(key: &str, want: usize) -> Result<Vec<usize>> {
    let v: std::result::Result<Vec<usize>, _> = key.split(',').map(|t| t.trim().parse::<usize>()).collect();
    match v {
        Ok(v) if v.len() == want && v.iter().all(|&x| x >= 1) => Ok(v),
        _ => Err(json_err(format!("bad orbital key {key:?}"))),
    }
}

/// Reads `{"m1": {"α,β": "r", …}, "m2": {"p,q,α,β,γ,δ": "r", …}}`; either
/// key may be absent.
pub fn load_specs(text: &str) -> Result<(OneBodySpec, TwoBodySpec)> {
    let root: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
    let mut one = OneBodySpec::default();
    let mut two = TwoBodySpec::default();
    if let Some(m1) = root.get("m1") {
        let obj = m1.as_object().ok_or_else(|| json_err("m1 must be an object"))?;
        for (k, v) in obj {
            let ix = parse_indices(k, 2)?;
            one.m1.insert((ix[0], ix[1]), parse_value(v)?);
        }
    }
    if let Some(m2) = root.get("m2") {
        let obj = m2.as_object().ok_or_else(|| json_err("m2 must be an object"))?;
        for (k, v) in obj {
            let mut parts = k.splitn(3, ',');
            let p = parts.next().and_then(Channel::parse);
            let q = parts.next().and_then(Channel::parse);
            let (Some(p), Some(q)) = (p, q) else { return Err(json_err(format!("bad channel key {k:?}"))) };
            let ix = parse_indices(parts.next().unwrap_or(""), 4)?;
            two.m2.insert((p, q, ix[0], ix[1], ix[2], ix[3]), parse_value(v)?);
        }
    }
    Ok((one, two))
}

fn zero_matrix(r: usize, c: usize) -> MeMatrix {
    vec![vec![RadicalSum::zero(); c]; r]
}

fn block_of(table: &CfpTable, f: &Partition) -> Result<std::ops::Range<usize>> {
    table
        .block(f, 0)
        .ok_or_else(|| Error::NoCommonParent(format!("{f} does not occur in {} x {}", table.f1, table.attach)))
}

/// ME of Σ_k o(k) between the components of f1 in its canonical basis
/// (slots 1..|f1|), by the same recursion as [`one_body_me`].
fn parent_one_body(engine: &Engine, f1: &Partition, spec: &OneBodySpec) -> Result<MeMatrix> {
    let n1 = f1.n();
    if n1 == 1 {
        return Ok(vec![vec![RadicalSum::from_rational(spec.get(1, 1))]]);
    }
    let mut task = ReductionTask::new(parent(f1), Partition::row(1));
    task.strict = false;
    let table = engine.table(&task)?;
    contract_one_body(engine, &table, &table, f1, f1, spec)
}

fn contract_one_body(
    engine: &Engine,
    bra: &CfpTable,
    ket: &CfpTable,
    f: &Partition,
    fp: &Partition,
    spec: &OneBodySpec,
) -> Result<MeMatrix> {
    let rb = block_of(bra, f)?;
    let rk = block_of(ket, fp)?;
    let mut out = zero_matrix(rb.len(), rk.len());
    if bra.f1 != ket.f1 {
        return Ok(out);
    }
    let pm = parent_one_body(engine, &bra.f1, spec)?;
    let last = RadicalSum::from_rational(spec.get(bra.n, bra.n));
    // Row-level operator: δ_pp′ [ME_{n−1}(i,i′) + δ_ii′ m1(n,n)].
    let size = bra.size();
    let mut row_op: Vec<Vec<(usize, RadicalSum)>> = vec![Vec::new(); size];
    for r in 0..size {
        for rp in 0..size {
            let (x, y) = (&bra.rows[r], &ket.rows[rp]);
            if x.attach_labels != y.attach_labels {
                continue;
            }
            let mut v = pm[x.parent_component][y.parent_component].clone();
            if x.parent_component == y.parent_component {
                v += &last;
            }
            if !v.is_zero() {
                row_op[r].push((rp, v));
            }
        }
    }
    for (a, cb) in rb.clone().enumerate() {
        for (b, ck) in rk.clone().enumerate() {
            let mut acc = RadicalSum::zero();
            for (r, ops) in row_op.iter().enumerate() {
                let x = &bra.entries[r][cb];
                if x.is_zero() {
                    continue;
                }
                for (rp, v) in ops {
                    let y = &ket.entries[*rp][ck];
                    if !y.is_zero() {
                        acc += &v.mul_radical(&(x * y));
                    }
                }
            }
            out[a][b] = acc;
        }
    }
    Ok(out)
}

/// ⟨f a| Σ_k o(k) |f′ b⟩ for the f block of `bra` and the f′ block of `ket`,
/// both single-particle tables, through the parentage recursion
/// ME_n = Σ C C′ [ME_{n−1}(i,i′) + δ_ii′ m1(n,n)] summed over equal attached
/// label. Tables with different parents give zero.
pub fn one_body_me(
    engine: &Engine,
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    spec: &OneBodySpec,
) -> Result<MeMatrix> {
    if bra.n != ket.n || bra.attach != Partition::row(1) || ket.attach != Partition::row(1) {
        return Err(Error::NoCommonParent("one-body elements need two single-particle tables of the same n".into()));
    }
    contract_one_body(engine, bra, ket, f, fp, spec)
}

/// v_{γδ}|w⟩ for the orbital pair (γ<δ), 1-based, appended to `acc`.
fn pair_action(acc: &mut Accumulator, w: &Word, c: &Rational, g: usize, d: usize, m: &[[Rational; 2]; 2]) {
    let (a, b) = (w.label_at(g - 1), w.label_at(d - 1));
    let sigma = if a < b { q(1) } else { q(-1) };
    let swapped = w.swap_slots(g - 1, d - 1);
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let sym = (&m[0][0] + &sigma * &m[0][1]) * &half;
    let anti = &sigma * (&m[1][0] + &sigma * &m[1][1]) * &half;
    acc.add(*w, &(c * (&sym + &anti)));
    acc.add(swapped, &(c * (&sym - &anti)));
}

/// Σ over orbital pairs accepted by `keep` of v_{γδ} applied to v.
pub fn apply_two_body(v: &WordVector, spec: &TwoBodySpec, keep: impl Fn(usize, usize) -> bool) -> WordVector {
    let n = v.n();
    let mut acc = Accumulator::new(n);
    for g in 1..=n {
        for d in g + 1..=n {
            if !keep(g, d) {
                continue;
            }
            let m = spec.pair_block(g, d);
            if m.iter().flatten().all(|x| x.is_zero()) {
                continue;
            }
            for (w, c) in v.terms() {
                pair_action(&mut acc, w, c, g, d, &m);
            }
        }
    }
    acc.finish()
}

/// Σ_k o(k) applied to v; only diagonal entries survive in the word space.
pub fn apply_one_body(v: &WordVector, spec: &OneBodySpec) -> WordVector {
    let t = spec.trace(v.n());
    v.scale(&t)
}

fn check_pair_tables(bra: &CfpTable, ket: &CfpTable) -> Result<(Channel, Channel)> {
    let ch = |t: &CfpTable| {
        if t.attach == Partition::row(2) {
            Some(Channel::S)
        } else if t.attach == Partition::column(2) {
            Some(Channel::A)
        } else {
            None
        }
    };
    match (ch(bra), ch(ket)) {
        (Some(p), Some(q)) if bra.n == ket.n => Ok((p, q)),
        _ => Err(Error::NoCommonParent("two-body elements need two pair tables of the same n".into())),
    }
}

/// The attached-pair part Σ C^{f a}_{(i,P)} C^{f′ b}_{(i,P)} m^{pq}(n−1,n,n−1,n):
/// the operator on the last two orbitals, contracted over equal parent
/// component and equal pair labels.
pub fn attached_pair_me(
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    spec: &TwoBodySpec,
) -> Result<MeMatrix> {
    let (p, qc) = check_pair_tables(bra, ket)?;
    let rb = block_of(bra, f)?;
    let rk = block_of(ket, fp)?;
    let mut out = zero_matrix(rb.len(), rk.len());
    if bra.f1 != ket.f1 {
        return Ok(out);
    }
    let n = bra.n;
    let m = spec.get(p, qc, n - 1, n, n - 1, n);
    if m.is_zero() {
        return Ok(out);
    }
    for (a, cb) in rb.clone().enumerate() {
        for (b, ck) in rk.clone().enumerate() {
            let mut acc = RadicalSum::zero();
            for r in 0..bra.size() {
                let (x, y) = (&bra.rows[r], &ket.rows[r]);
                debug_assert_eq!((x.parent_component, &x.attach_labels), (y.parent_component, &y.attach_labels));
                let prod = &bra.entries[r][cb] * &ket.entries[r][ck];
                if !prod.is_zero() {
                    acc.add_radical(&(&prod * &m));
                }
            }
            out[a][b] = acc;
        }
    }
    Ok(out)
}

/// ⟨f a| Σ_{γ<δ} v_{γδ} |f′ b⟩ for blocks of two pair tables: the attached
/// pair through [`attached_pair_me`], every other orbital pair through the
/// product-basis operator matrix, contracted with the table columns.
pub fn two_body_me(
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    spec: &TwoBodySpec,
) -> Result<MeMatrix> {
    let mut out = attached_pair_me(f, fp, bra, ket, spec)?;
    let n = bra.n;
    let rb = block_of(bra, f)?;
    let rk = block_of(ket, fp)?;
    let images: Vec<WordVector> =
        ket.row_states.iter().map(|s| apply_two_body(s, spec, |g, d| (g, d) != (n - 1, n))).collect();
    // Unnormalized M_rr′ = ⟨row_r| V_rest |row_r′⟩.
    let m: Vec<Vec<Rational>> =
        bra.row_states.iter().map(|s| images.iter().map(|img| inner(s, img)).collect()).collect();
    for (a, cb) in rb.enumerate() {
        for (b, ck) in rk.clone().enumerate() {
            let mut acc = Rational::zero();
            for (r, row) in m.iter().enumerate() {
                let x = &bra.coeffs[cb][r];
                if x.is_zero() {
                    continue;
                }
                for (rp, v) in row.iter().enumerate() {
                    let y = &ket.coeffs[ck][rp];
                    if !v.is_zero() && !y.is_zero() {
                        acc += x * y * v;
                    }
                }
            }
            let norm = &bra.col_norms[cb] * &ket.col_norms[ck];
            out[a][b].add_radical(&Radical::canonicalize(acc, norm.recip())?);
        }
    }
    Ok(out)
}

/// ⟨u|Op|v⟩/√(|u|²|v|²) for unnormalized u and an image Op·v.
fn normalized_overlap(u: &WordVector, image: &WordVector, v: &WordVector) -> Result<RadicalSum> {
    let x = inner(u, image);
    Ok(RadicalSum::from(&Radical::canonicalize(x, (u.norm2() * v.norm2()).recip())?))
}

/// Word-space evaluation of ⟨f a|Σ_k o(k)|f′ b⟩ from the reconstructed
/// column states.
pub fn one_body_oracle(
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    spec: &OneBodySpec,
) -> Result<MeMatrix> {
    oracle(f, fp, bra, ket, |v| apply_one_body(v, spec))
}

/// Word-space evaluation of ⟨f a|Σ_{γ<δ} v_{γδ}|f′ b⟩.
pub fn two_body_oracle(
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    spec: &TwoBodySpec,
) -> Result<MeMatrix> {
    oracle(f, fp, bra, ket, |v| apply_two_body(v, spec, |_, _| true))
}

/// Word-space evaluation of the last-pair operator v_{n−1,n} alone.
pub fn attached_pair_oracle(
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    spec: &TwoBodySpec,
) -> Result<MeMatrix> {
    let n = bra.n;
    oracle(f, fp, bra, ket, |v| apply_two_body(v, spec, |g, d| (g, d) == (n - 1, n)))
}

fn oracle(
    f: &Partition,
    fp: &Partition,
    bra: &CfpTable,
    ket: &CfpTable,
    op: impl Fn(&WordVector) -> WordVector,
) -> Result<MeMatrix> {
    let rb = block_of(bra, f)?;
    let rk = block_of(ket, fp)?;
    let kets: Vec<(WordVector, WordVector)> = rk
        .map(|c| {
            let v = ket.column_state(c);
            let img = op(&v);
            (v, img)
        })
        .collect();
    rb.map(|c| {
        let u = bra.column_state(c);
        kets.iter().map(|(v, img)| normalized_overlap(&u, img, v)).collect()
    })
    .collect()
}

/// A state of definite overall symmetry in a product of two label spaces:
/// Ψ = Σ_f c_f Σ_{a,b} K^{f,g}_{ab} |f a⟩|g b⟩ with g = f for overall [n] and
/// g = f̃ for overall [1ⁿ], K the inner Clebsch-Gordan coefficients and the
/// factors in the canonical bases on labels 1..n.
#[derive(Clone, Debug)]
pub struct CoupledSystem {
    pub n: usize,
    pub overall: Partition,
    /// (f in the first space, weight c_f); weights are normalized by the
    /// caller when a unit state is wanted.
    pub components: Vec<(Partition, Rational)>,
}

impl CoupledSystem {
    pub fn partner(&self, f: &Partition) -> Partition {
        if self.overall.is_row() {
            f.clone()
        } else {
            conjugate(f)
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.overall.n() == self.n && (self.overall.is_row() || self.overall.is_column());
        if !ok {
            return Err(Error::BadOverall(format!("overall symmetry {} is neither [n] nor [1^n]", self.overall)));
        }
        if self.components.iter().any(|(f, _)| f.n() != self.n) {
            return Err(Error::SizeMismatch("component partition of the wrong size".into()));
        }
        Ok(())
    }

    /// K^{f,g→overall} as a dim f × dim g matrix of radicals.
    fn coupling(&self, engine: &Engine, f: &Partition) -> Result<Vec<Vec<Radical>>> {
        let g = self.partner(f);
        let cg = inner_cg(engine, f, &g, &self.overall)?;
        let (df, dg) = (crate::combinatorics::dimension(f) as usize, crate::combinatorics::dimension(&g) as usize);
        Ok((0..df).map(|a| (0..dg).map(|b| cg.copies[0][a * dg + b][0].clone()).collect()).collect())
    }
}

/// Operator acting on one or two particle labels inside a label space.
pub enum LabelOperator<'a> {
    /// o(label): m1 on the orbital the label occupies.
    OneBody(&'a OneBodySpec),
    /// v(label pair) on the orbital pair the two labels occupy.
    TwoBody(&'a TwoBodySpec),
}

impl LabelOperator<'_> {
    fn apply(&self, v: &WordVector, labels: &[u8]) -> WordVector {
        let mut acc = Accumulator::new(v.n());
        for (w, c) in v.terms() {
            match self {
                LabelOperator::OneBody(spec) => {
                    let s = w.slot_of(labels[0]).unwrap() + 1;
                    acc.add(*w, &(c * spec.get(s, s)));
                }
                LabelOperator::TwoBody(spec) => {
                    let s1 = w.slot_of(labels[0]).unwrap() + 1;
                    let s2 = w.slot_of(labels[1]).unwrap() + 1;
                    let (g, d) = (s1.min(s2), s1.max(s2));
                    pair_action(&mut acc, w, c, g, d, &spec.pair_block(g, d));
                }
            }
        }
        acc.finish()
    }

    fn arity(&self) -> usize {
        match self {
            LabelOperator::OneBody(_) => 1,
            LabelOperator::TwoBody(_) => 2,
        }
    }
}

/// ⟨f a|op(labels)|f′ a′⟩ over the canonical normalized bases.
fn label_me(
    engine: &Engine,
    f: &Partition,
    fp: &Partition,
    op: &LabelOperator,
    labels: &[u8],
) -> Result<Vec<Vec<Radical>>> {
    let b = engine.basis(f)?;
    let bp = engine.basis(fp)?;
    let images: Vec<WordVector> = bp.vectors.iter().map(|v| op.apply(v, labels)).collect();
    b.vectors
        .iter()
        .map(|u| {
            images
                .iter()
                .zip(&bp.vectors)
                .map(|(img, v)| Radical::canonicalize(inner(u, img), (u.norm2() * v.norm2()).recip()))
                .collect()
        })
        .collect()
}

/// ⟨Ψ|Σ_k o^φ(k) o^χ(k)|Ψ′⟩ (one-body) or ⟨Ψ|Σ_{k<l} v^φ(k,l) v^χ(k,l)|Ψ′⟩
/// (two-body). By the overall symmetry the sum equals n (resp. C(n,2)) times
/// the term on the highest label(s). Two-body operators must not mix the S
/// and A pair channels, otherwise they are not relabeling covariant.
pub fn combined_me(
    engine: &Engine,
    bra: &CoupledSystem,
    ket: &CoupledSystem,
    phi: &LabelOperator,
    chi: &LabelOperator,
) -> Result<RadicalSum> {
    bra.validate()?;
    ket.validate()?;
    if bra.n != ket.n || bra.overall != ket.overall {
        return Err(Error::BadOverall("bra and ket need the same n and overall symmetry".into()));
    }
    if phi.arity() != chi.arity() {
        return Err(Error::ShapeMismatch("both spaces need operators of the same rank".into()));
    }
    let n = bra.n;
    let labels: Vec<u8> = (n as u8 + 1 - phi.arity() as u8..=n as u8).collect();
    let count = if phi.arity() == 1 { n as u128 } else { binomial(n, 2) };
    let mut total = RadicalSum::zero();
    for (f, c) in &bra.components {
        let k = bra.coupling(engine, f)?;
        let g = bra.partner(f);
        for (fp, cp) in &ket.components {
            let kp = ket.coupling(engine, fp)?;
            let gp = ket.partner(fp);
            let x = label_me(engine, f, fp, phi, &labels)?;
            let y = label_me(engine, &g, &gp, chi, &labels)?;
            let weight = c * cp;
            for (a, ka) in k.iter().enumerate() {
                for (b, kab) in ka.iter().enumerate() {
                    if kab.is_zero() {
                        continue;
                    }
                    for (ap, kpa) in kp.iter().enumerate() {
                        for (bp, kpab) in kpa.iter().enumerate() {
                            let t = &(&(kab * kpab) * &x[a][ap]) * &y[b][bp];
                            if !t.is_zero() {
                                total.add_radical(&(&t * &weight));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total.mul_radical(&Radical::from_rational(Rational::from_integer(BigInt::from(count)))))
}

/// Ψ expanded over pairs of words (first space, second space).
pub fn coupled_state(engine: &Engine, system: &CoupledSystem) -> Result<BTreeMap<(Word, Word), RadicalSum>> {
    system.validate()?;
    let mut out: BTreeMap<(Word, Word), RadicalSum> = BTreeMap::new();
    for (f, c) in &system.components {
        let k = system.coupling(engine, f)?;
        let g = system.partner(f);
        let bf = engine.basis(f)?;
        let bg = engine.basis(&g)?;
        for (a, ka) in k.iter().enumerate() {
            for (b, kab) in ka.iter().enumerate() {
                if kab.is_zero() {
                    continue;
                }
                let (u, v) = (&bf.vectors[a], &bg.vectors[b]);
                let scale = kab * &Radical::canonicalize(c.clone(), (u.norm2() * v.norm2()).recip())?;
                for (wu, cu) in u.terms() {
                    for (wv, cv) in v.terms() {
                        let t = &scale * &(cu * cv);
                        out.entry((*wu, *wv)).or_insert_with(RadicalSum::zero).add_radical(&t);
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Explicit Σ over all particles (or particle pairs) of the product
/// operator on the doubled word space.
pub fn combined_oracle(
    engine: &Engine,
    bra: &CoupledSystem,
    ket: &CoupledSystem,
    phi: &LabelOperator,
    chi: &LabelOperator,
) -> Result<RadicalSum> {
    let psi = coupled_state(engine, bra)?;
    let psi_p = coupled_state(engine, ket)?;
    let n = bra.n as u8;
    let groups: Vec<Vec<u8>> = if phi.arity() == 1 {
        (1..=n).map(|k| vec![k]).collect()
    } else {
        (1..=n).flat_map(|k| (k + 1..=n).map(move |l| vec![k, l])).collect()
    };
    let mut total = RadicalSum::zero();
    for labels in &groups {
        // Apply op^φ ⊗ op^χ word pair by word pair.
        let mut image: BTreeMap<(Word, Word), RadicalSum> = BTreeMap::new();
        for ((wu, wv), c) in &psi_p {
            let a = phi.apply(&WordVector::from_word(*wu), labels);
            let b = chi.apply(&WordVector::from_word(*wv), labels);
            for (x, cx) in a.terms() {
                for (y, cy) in b.terms() {
                    let t = c.mul_radical(&Radical::from_rational(cx * cy));
                    *image.entry((*x, *y)).or_insert_with(RadicalSum::zero) += &t;
                }
            }
        }
        for (key, c) in &psi {
            if let Some(d) = image.get(key) {
                total += &(c * d);
            }
        }
    }
    Ok(total)
}

/// Per-particle symbol strings, e.g. quark flavor and spin: a state is a
/// rational combination of symbol tuples, position k holding particle k.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymbolState {
    pub terms: BTreeMap<Vec<String>, Rational>,
}

impl SymbolState {
    pub fn add(&mut self, symbols: &[&str], c: Rational) {
        let key: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Rational) -> SymbolState {
        let mut out = SymbolState::default();
        for (k, v) in &self.terms {
            let refs: Vec<&str> = k.iter().map(|s| s.as_str()).collect();
            out.add(&refs, v * c);
        }
        out
    }

    pub fn norm2(&self) -> Rational {
        self.terms.values().map(|c| c * c).sum()
    }

    pub fn inner(&self, other: &SymbolState) -> Rational {
        self.terms.iter().filter_map(|(k, c)| other.terms.get(k).map(|d| c * d)).sum()
    }

    /// Moves the symbols of particle k to particle perm[k-1].
    pub fn permute(&self, perm: &[u8]) -> SymbolState {
        let mut out = SymbolState::default();
        for (k, c) in &self.terms {
            let mut moved = k.clone();
            for (i, s) in k.iter().enumerate() {
                moved[perm[i] as usize - 1] = s.clone();
            }
            let refs: Vec<&str> = moved.iter().map(|s| s.as_str()).collect();
            out.add(&refs, c.clone());
        }
        out
    }

    /// ⟨Σ_k o(k)⟩ for an operator diagonal in the per-particle symbols.
    pub fn one_body_expectation(&self, value: impl Fn(&str) -> Rational) -> Rational {
        self.terms.iter().map(|(k, c)| c * c * k.iter().map(|s| value(s)).sum::<Rational>()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn table(f1: &str, a: &str) -> std::sync::Arc<CfpTable> {
        Engine::shared().table(&ReductionTask::new(p(f1), p(a))).unwrap()
    }

    #[test]
    fn spec_parsing() {
        let (one, two) = load_specs(r#"{"m1": {"1,1": "3/2", "2,3": 1}, "m2": {"S,A,1,2,1,2": "-1/4"}}"#).unwrap();
        assert_eq!(one.get(1, 1), crate::exact::qf(3, 2));
        assert_eq!(one.get(3, 2), q(1));
        assert_eq!(two.get(Channel::S, Channel::A, 1, 2, 1, 2), crate::exact::qf(-1, 4));
        assert!(load_specs(r#"{"m2": {"X,A,1,2,1,2": "1"}}"#).is_err());
    }

    #[test]
    fn number_operator() {
        let t = table("[2]", "[1]");
        let me = one_body_me(Engine::shared(), &p("[2,1]"), &p("[2,1]"), &t, &t, &OneBodySpec::identity(3)).unwrap();
        for (i, row) in me.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.as_rational().unwrap(), if i == j { q(3) } else { q(0) });
            }
        }
        let me = one_body_me(Engine::shared(), &p("[3]"), &p("[2,1]"), &t, &t, &OneBodySpec::identity(3)).unwrap();
        assert!(me.iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn symmetric_pairs_counted() {
        let t = table("[2]", "[2]");
        let spec = TwoBodySpec::symmetric_pair_counter(4);
        let me = two_body_me(&p("[4]"), &p("[4]"), &t, &t, &spec).unwrap();
        assert_eq!(me[0][0].as_rational().unwrap(), q(6));
    }

    #[test]
    fn color_singlet_is_antisymmetric() {
        let mut s = SymbolState::default();
        for (x, y, z) in [("r", "g", "b"), ("g", "b", "r"), ("b", "r", "g")] {
            s.add(&[x, y, z], q(1));
            s.add(&[y, x, z], q(-1));
        }
        assert_eq!(s.norm2(), q(6));
        for t in [[2u8, 1, 3], [1, 3, 2], [3, 2, 1]] {
            assert_eq!(s.permute(&t), s.scale(&q(-1)));
        }
    }
}
