//! Group families: cyclic, abelian, dihedral, symmetric, alternating, split
//! metacyclic `C_n ⋊ C_m`, the metacyclic p-groups, `PSL_2(q)`, `PSL_3(q)`
//! and direct products, with explicit automorphism actions where known.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::automorphisms::{ActionSet, AutError, GroupMap, Provenance};
use crate::field::{Field, FieldError};
use crate::group::{FiniteGroup, GroupError};
use crate::numtheory::{gcd, multiplicative_order, pow_mod, prime_power};
use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("bad action: {k}^{m} != 1 mod {n} or gcd({k}, {n}) != 1")]
    BadAction { n: u64, m: u64, k: u64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("{0} is not a prime power")]
    BadPrimePower(u64),
    #[error("cannot parse family spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error("domain permutation for the {0} automorphism does not normalize the group")]
    NotNormalizing(String),
    #[error("automorphism closure has order {got}, expected {expected}")]
    AutOrder { got: u64, expected: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

impl From<FieldError> for ConstructError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::BadPrimePower(q) => ConstructError::BadPrimePower(q),
            FieldError::TooLarge(q) => ConstructError::BadParameters(format!("field F_{q} too large")),
        }
    }
}

/// A group family with its parameters, written `tag:params` on the
/// command line (`cpm:11,5,3`, `psl:2,7`, `prod:cyc:2*alt:5`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Cyclic(u64),
    Abelian(Vec<u64>),
    Dihedral(u64),
    Symmetric(usize),
    Alternating(usize),
    SemidirectCyclic { n: u64, m: u64, k: u64 },
    MetacyclicPq { q: u64, r: u64 },
    Psl { n: usize, q: u64 },
    Product(Box<FamilySpec>, Box<FamilySpec>),
}

fn parse_ints(spec: &str, body: &str, sep: char) -> Result<Vec<u64>, ConstructError> {
    body.split(sep)
        .map(|t| {
            t.trim().parse::<u64>().map_err(|_| ConstructError::Parse {
                spec: spec.to_string(),
                reason: format!("{t:?} is not a non-negative integer"),
            })
        })
        .collect()
}

/// Least `k` in `1..n` of multiplicative order exactly `m` modulo `n`.
pub fn least_faithful_exponent(n: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    (2..n).find(|&k| multiplicative_order(k, n) == Some(m))
}

impl FromStr for FamilySpec {
    type Err = ConstructError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let spec = spec.trim();
        let err = |reason: &str| ConstructError::Parse {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (tag, body) = spec.split_once(':').ok_or_else(|| err("expected tag:params"))?;
        let arity = |v: &[u64], lo: usize, hi: usize| {
            if v.len() < lo || v.len() > hi {
                Err(err(&format!("expected {lo}..={hi} parameters, got {}", v.len())))
            } else {
                Ok(())
            }
        };
        Ok(match tag {
            "cyc" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 1, 1)?;
                FamilySpec::Cyclic(v[0])
            }
            "ab" => FamilySpec::Abelian(parse_ints(spec, body, 'x')?),
            "dih" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 1, 1)?;
                FamilySpec::Dihedral(v[0])
            }
            "sym" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 1, 1)?;
                FamilySpec::Symmetric(v[0] as usize)
            }
            "alt" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 1, 1)?;
                FamilySpec::Alternating(v[0] as usize)
            }
            "cpm" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 2, 3)?;
                let (n, m) = (v[0], v[1]);
                let k = match v.get(2) {
                    Some(&k) => k,
                    None => least_faithful_exponent(n, m)
                        .ok_or_else(|| err(&format!("no k of order {m} mod {n}")))?,
                };
                FamilySpec::SemidirectCyclic { n, m, k }
            }
            "meta" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 2, 2)?;
                FamilySpec::MetacyclicPq { q: v[0], r: v[1] }
            }
            "psl" => {
                let v = parse_ints(spec, body, ',')?;
                arity(&v, 2, 2)?;
                FamilySpec::Psl {
                    n: v[0] as usize,
                    q: v[1],
                }
            }
            "prod" => {
                // try each '*' so nested products parse on either side
                for (i, _) in body.match_indices('*') {
                    if let (Ok(a), Ok(b)) = (body[..i].parse(), body[i + 1..].parse()) {
                        return Ok(FamilySpec::Product(Box::new(a), Box::new(b)));
                    }
                }
                return Err(err("expected prod:<spec>*<spec>"));
            }
            other => return Err(err(&format!("unknown family tag {other:?}"))),
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cyclic(n) => write!(f, "cyc:{n}"),
            FamilySpec::Abelian(ds) => {
                let parts: Vec<String> = ds.iter().map(u64::to_string).collect();
                write!(f, "ab:{}", parts.join("x"))
            }
            FamilySpec::Dihedral(n) => write!(f, "dih:{n}"),
            FamilySpec::Symmetric(n) => write!(f, "sym:{n}"),
            FamilySpec::Alternating(n) => write!(f, "alt:{n}"),
            FamilySpec::SemidirectCyclic { n, m, k } => write!(f, "cpm:{n},{m},{k}"),
            FamilySpec::MetacyclicPq { q, r } => write!(f, "meta:{q},{r}"),
            FamilySpec::Psl { n, q } => write!(f, "psl:{n},{q}"),
            FamilySpec::Product(a, b) => write!(f, "prod:{a}*{b}"),
        }
    }
}

impl FamilySpec {
    /// Group order from the parameters alone.
    pub fn order(&self) -> u128 {
        match self {
            FamilySpec::Cyclic(n) => *n as u128,
            FamilySpec::Abelian(ds) => ds.iter().map(|&d| d as u128).product(),
            FamilySpec::Dihedral(n) => 2 * *n as u128,
            FamilySpec::Symmetric(n) => factorial(*n),
            FamilySpec::Alternating(n) => (factorial(*n) / 2).max(1),
            FamilySpec::SemidirectCyclic { n, m, .. } => *n as u128 * *m as u128,
            FamilySpec::MetacyclicPq { q, r } => *q as u128 * *r as u128 * *r as u128,
            FamilySpec::Psl { n, q } if (2..=3).contains(n) && *q >= 2 => psl_order(*n, *q),
            FamilySpec::Psl { .. } => 0,
            FamilySpec::Product(a, b) => a.order() * b.order(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup, ConstructError> {
        check_order(self.order(), cap)?;
        let g = match self {
            FamilySpec::Cyclic(n) => cyclic(*n)?,
            FamilySpec::Abelian(ds) => abelian(ds, cap)?,
            FamilySpec::Dihedral(n) => dihedral(*n)?,
            FamilySpec::Symmetric(n) => symmetric(*n, cap)?,
            FamilySpec::Alternating(n) => alternating(*n, cap)?,
            FamilySpec::SemidirectCyclic { n, m, k } => semidirect_cyclic(*n, *m, *k)?,
            FamilySpec::MetacyclicPq { q, r } => metacyclic_pq(*q, *r)?,
            FamilySpec::Psl { n, q } => psl(*n, *q, cap)?,
            FamilySpec::Product(a, b) => {
                let ga = a.build(cap)?;
                let gb = b.build(cap)?;
                FiniteGroup::direct_product(&ga, &gb, cap)?
            }
        };
        if g.order() > cap {
            return Err(GroupError::CapExceeded(cap).into());
        }
        let label = match self {
            FamilySpec::Psl { q, .. } => {
                let field = Field::new(*q)?;
                match field.polynomial() {
                    Some(_) => format!("{self} [{}]", field.describe()),
                    None => self.to_string(),
                }
            }
            _ => self.to_string(),
        };
        Ok(g.with_label(label))
    }

    /// An automorphism action known in closed form, when the family has one:
    /// `PSL` (full `Aut` via diagonal, field and graph automorphisms), and
    /// symmetric and alternating groups of degree other than 6.
    pub fn explicit_aut(&self, g: &FiniteGroup) -> Option<Result<ActionSet, ConstructError>> {
        match self {
            FamilySpec::Psl { n, q } => Some(psl_aut_action(*n, *q, g)),
            FamilySpec::Symmetric(n) if *n != 6 => Some(symmetric_aut_action(*n, g, false)),
            FamilySpec::Alternating(n) if *n != 6 => Some(symmetric_aut_action(*n, g, true)),
            _ => None,
        }
    }
}

fn check_order(order: u128, cap: usize) -> Result<(), ConstructError> {
    if order > cap as u128 {
        Err(GroupError::CapExceeded(cap).into())
    } else {
        Ok(())
    }
}

pub fn cyclic(n: u64) -> Result<FiniteGroup, ConstructError> {
    if n == 0 {
        return Err(ConstructError::BadParameters("cyclic group of order 0".into()));
    }
    Ok(FiniteGroup::from_semidirect(n, 1, 1).with_label(format!("cyc:{n}")))
}

/// `C_{d_1} x .. x C_{d_t}`.
pub fn abelian(ds: &[u64], cap: usize) -> Result<FiniteGroup, ConstructError> {
    let Some((&first, rest)) = ds.split_first() else {
        return Err(ConstructError::BadParameters("abelian group needs a factor".into()));
    };
    check_order(ds.iter().map(|&d| d as u128).product(), cap)?;
    let mut g = cyclic(first)?;
    for &d in rest {
        g = FiniteGroup::direct_product(&g, &cyclic(d)?, cap)?;
    }
    let parts: Vec<String> = ds.iter().map(u64::to_string).collect();
    Ok(g.with_label(format!("ab:{}", parts.join("x"))))
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: u64) -> Result<FiniteGroup, ConstructError> {
    if n == 0 {
        return Err(ConstructError::BadParameters("dihedral group needs n >= 1".into()));
    }
    Ok(semidirect_cyclic(n, 2, n - 1)?.with_label(format!("dih:{n}")))
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn symmetric(n: usize, cap: usize) -> Result<FiniteGroup, ConstructError> {
    check_order(factorial(n), cap)?;
    let d = n.max(1);
    let gens = if n >= 2 {
        let cycle: Vec<u32> = (0..d as u32).map(|i| (i + 1) % d as u32).collect();
        let mut swap: Vec<u32> = (0..d as u32).collect();
        swap.swap(0, 1);
        vec![
            Permutation::from_images(cycle).unwrap(),
            Permutation::from_images(swap).unwrap(),
        ]
    } else {
        vec![Permutation::identity(d)]
    };
    Ok(FiniteGroup::from_permutation_generators(&gens, cap)?.with_label(format!("sym:{n}")))
}

pub fn alternating(n: usize, cap: usize) -> Result<FiniteGroup, ConstructError> {
    check_order(factorial(n) / 2, cap)?;
    let d = n.max(1);
    let cycle_on = |pts: &[u32]| {
        let mut im: Vec<u32> = (0..d as u32).collect();
        for (i, &p) in pts.iter().enumerate() {
            im[p as usize] = pts[(i + 1) % pts.len()];
        }
        Permutation::from_images(im).unwrap()
    };
    let gens = match n {
        0..=2 => vec![Permutation::identity(d)],
        3 => vec![cycle_on(&[0, 1, 2])],
        _ => {
            let long: Vec<u32> = if n % 2 == 1 {
                (0..n as u32).collect()
            } else {
                (1..n as u32).collect()
            };
            vec![cycle_on(&[0, 1, 2]), cycle_on(&long)]
        }
    };
    Ok(FiniteGroup::from_permutation_generators(&gens, cap)?.with_label(format!("alt:{n}")))
}

/// `<a, b | a^n = b^m = 1, b a b^-1 = a^k>`, elements `a^i b^j` at `i + n*j`.
pub fn semidirect_cyclic(n: u64, m: u64, k: u64) -> Result<FiniteGroup, ConstructError> {
    if n == 0 || m == 0 {
        return Err(ConstructError::BadParameters(format!("C_{n} ⋊ C_{m}")));
    }
    if gcd(k % n, n) != 1 && n > 1 || pow_mod(k, m, n) != 1 % n {
        return Err(ConstructError::BadAction { n, m, k });
    }
    Ok(FiniteGroup::from_semidirect(n, m, k).with_label(format!("cpm:{n},{m},{k}")))
}

/// `<a, b | a^{qr} = b^r = 1, b a b^-1 = a^{q+1}>` of order `q r^2`.
pub fn metacyclic_pq(q: u64, r: u64) -> Result<FiniteGroup, ConstructError> {
    if r <= 1 || q == 0 || !q.is_multiple_of(r) {
        return Err(ConstructError::BadParameters(format!(
            "metacyclic group needs 1 < r | q, got q = {q}, r = {r}"
        )));
    }
    let n = q * r;
    // (q+1)^r = 1 + r q + ... is 1 mod qr because r | q
    if pow_mod(q + 1, r, n) != 1 {
        return Err(ConstructError::BadAction { n, m: r, k: q + 1 });
    }
    Ok(FiniteGroup::from_semidirect(n, r, q + 1).with_label(format!("meta:{q},{r}")))
}

/// `|PSL_n(q)| = q^{n(n-1)/2} prod_{i=2..n} (q^i - 1) / gcd(n, q-1)`.
pub fn psl_order(n: usize, q: u64) -> u128 {
    let q128 = q as u128;
    let mut order = q128.saturating_pow((n * (n - 1) / 2) as u32);
    for i in 2..=n as u32 {
        order = order.saturating_mul(q128.saturating_pow(i) - 1);
    }
    order / gcd(n as u64, q - 1) as u128
}

/// Projective points (and for `n = 3` lines) of `F_q^n`, normalised with
/// first nonzero coordinate 1, in lexicographic order.
struct Projective {
    field: Field,
    n: usize,
    points: Vec<Vec<u32>>,
    index: FxHashMap<Vec<u32>, u32>,
}

impl Projective {
    fn new(n: usize, q: u64) -> Result<Self, ConstructError> {
        let field = Field::new(q)?;
        let mut points = Vec::new();
        let total = (q as usize).pow(n as u32);
        for code in 0..total {
            // most significant coordinate first so the order is lexicographic
            let mut v = vec![0u32; n];
            let mut c = code;
            for i in (0..n).rev() {
                v[i] = (c % q as usize) as u32;
                c /= q as usize;
            }
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                points.push(v);
            }
        }
        let index = points
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        Ok(Projective {
            field,
            n,
            points,
            index,
        })
    }

    fn normalize(&self, v: &[u32]) -> u32 {
        let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector");
        let s = self.field.inv(lead);
        let w: Vec<u32> = v.iter().map(|&x| self.field.mul(s, x)).collect();
        self.index[&w]
    }

    fn apply(&self, m: &[u32], v: &[u32]) -> u32 {
        let f = &self.field;
        let n = self.n;
        let w: Vec<u32> = (0..n)
            .map(|i| (0..n).fold(0, |acc, j| f.add(acc, f.mul(m[i * n + j], v[j]))))
            .collect();
        self.normalize(&w)
    }

    /// Domain permutation of a matrix `m`; for `n = 3` the lines follow
    /// `inv_t = m^{-T}` and are numbered after the points.
    fn matrix_perm(&self, m: &[u32], inv_t: &[u32]) -> Permutation {
        let np = self.points.len();
        let mut images: Vec<u32> = self.points.iter().map(|v| self.apply(m, v)).collect();
        if self.n == 3 {
            images.extend(self.points.iter().map(|v| self.apply(inv_t, v) + np as u32));
        }
        Permutation::from_images(images).expect("invertible matrix permutes the domain")
    }

    fn identity(&self) -> Vec<u32> {
        let n = self.n;
        (0..n * n).map(|i| (i / n == i % n) as u32).collect()
    }

    /// Elementary transvection `I + t e_ij`.
    fn transvection(&self, i: usize, j: usize, t: u32) -> Vec<u32> {
        let mut m = self.identity();
        m[i * self.n + j] = t;
        m
    }

    fn transvection_perm(&self, i: usize, j: usize, t: u32) -> Permutation {
        let m = self.transvection(i, j, t);
        let inv_t = self.transvection(j, i, self.field.neg(t));
        self.matrix_perm(&m, &inv_t)
    }
}

/// `PSL_2(q)` on the `q+1` projective points, or `PSL_3(q)` on the
/// `2(q^2+q+1)` points and lines of the projective plane.
pub fn psl(n: usize, q: u64, cap: usize) -> Result<FiniteGroup, ConstructError> {
    if !(2..=3).contains(&n) {
        return Err(ConstructError::BadParameters(format!(
            "PSL_n(q) is supported for n in {{2, 3}}, got n = {n}"
        )));
    }
    if prime_power(q).is_none() {
        return Err(ConstructError::BadPrimePower(q));
    }
    check_order(psl_order(n, q), cap)?;
    let space = Projective::new(n, q)?;
    let basis = space.field.basis();
    let mut gens = Vec::new();
    for &b in &basis {
        gens.push(space.transvection_perm(0, 1, b));
    }
    for &b in &basis {
        gens.push(space.transvection_perm(1, 0, b));
    }
    if n == 3 {
        gens.push(space.transvection_perm(1, 2, 1));
        gens.push(space.transvection_perm(2, 1, 1));
    }
    let g = FiniteGroup::from_permutation_generators(&gens, cap)?;
    debug_assert_eq!(g.order() as u128, psl_order(n, q));
    Ok(g.with_label(format!("psl:{n},{q}")))
}

/// The automorphism `x -> s x s^-1` of a permutation group induced by a
/// normalizing domain permutation `s`.
pub fn domain_conjugation(
    g: &FiniteGroup,
    s: &Permutation,
    what: &str,
) -> Result<GroupMap, ConstructError> {
    let s_inv = s.inverse();
    let mut images = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let p = g
            .permutation(x)
            .ok_or_else(|| ConstructError::NotNormalizing(what.to_string()))?;
        let c = s.compose(&p).compose(&s_inv);
        let y = g
            .find_permutation(&c)
            .ok_or_else(|| ConstructError::NotNormalizing(what.to_string()))?;
        images.push(y as u32);
    }
    Ok(GroupMap { images })
}

/// Generators of `Aut(PSL_n(q))`: inner automorphisms, the diagonal
/// automorphism `diag(w, 1, ..)` for `w` primitive, the Frobenius on
/// coordinates, and for `n = 3` the point-line swap. The closure order is
/// checked against `|G| gcd(n, q-1) k (2 if n = 3)`.
pub fn psl_aut_action(n: usize, q: u64, g: &FiniteGroup) -> Result<ActionSet, ConstructError> {
    let (_, k) = prime_power(q).ok_or(ConstructError::BadPrimePower(q))?;
    let space = Projective::new(n, q)?;
    let f = &space.field;
    let mut extra = Vec::new();
    let d = gcd(n as u64, q - 1);
    if d > 1 {
        let w = f.primitive();
        let mut m = space.identity();
        m[0] = w;
        let mut inv_t = space.identity();
        inv_t[0] = f.inv(w);
        let s = space.matrix_perm(&m, &inv_t);
        extra.push(domain_conjugation(g, &s, "diagonal")?);
    }
    let np = space.points.len();
    if k > 1 {
        let frob = |v: &Vec<u32>| -> u32 {
            let w: Vec<u32> = v.iter().map(|&x| f.frobenius(x)).collect();
            space.index[&w]
        };
        let mut images: Vec<u32> = space.points.iter().map(frob).collect();
        if n == 3 {
            images.extend(space.points.iter().map(|v| frob(v) + np as u32));
        }
        let s = Permutation::from_images(images).expect("Frobenius permutes the domain");
        extra.push(domain_conjugation(g, &s, "field")?);
    }
    if n == 3 {
        let images: Vec<u32> = (0..2 * np as u32)
            .map(|i| if (i as usize) < np { i + np as u32 } else { i - np as u32 })
            .collect();
        let s = Permutation::from_images(images).unwrap();
        extra.push(domain_conjugation(g, &s, "graph")?);
    }
    let mut a = ActionSet::with_inner(g, extra, Provenance::AutExplicit)?;
    let expected = g.order() as u64 * d * k as u64 * if n == 3 { 2 } else { 1 };
    let got = a.closure_order(g);
    if got != expected {
        return Err(ConstructError::AutOrder { got, expected });
    }
    a = ActionSet::from_parts_unchecked(
        a.generators().to_vec(),
        true,
        Provenance::AutExplicit,
        Some(got),
    );
    Ok(a)
}

/// `Aut(S_n) = S_n` and `Aut(A_n) = S_n` for `n != 6`: conjugation by the
/// transposition `(1 2)` added to the inner automorphisms of `A_n`.
fn symmetric_aut_action(
    n: usize,
    g: &FiniteGroup,
    alternating: bool,
) -> Result<ActionSet, ConstructError> {
    let mut extra = Vec::new();
    if alternating && n >= 3 {
        let mut im: Vec<u32> = (0..n as u32).collect();
        im.swap(0, 1);
        let s = Permutation::from_images(im).unwrap();
        extra.push(domain_conjugation(g, &s, "transposition")?);
    }
    Ok(ActionSet::with_inner(g, extra, Provenance::AutExplicit)?)
}
