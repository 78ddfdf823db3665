//! Rational surfaces from plane linear systems, and their passage into
//! `G(1,4)`.
//!
//! A model spec `(a; i, j, k, ...)` is the system of degree-`a` plane curves
//! with `i` general base points of multiplicity 1, `j` of multiplicity 2,
//! and so on; its image `T` lives in `P^N`. A curve spec `(e; l, m, ...)`
//! draws a degree-`e` curve through `l` of the simple points, `m` of the
//! double points, each simply. When that curve is rational we find a
//! projectivity of `P^6` pushing it into the Segre threefold, and the
//! inverse projection onto `G(1,4)` turns `T` into a surface of lines.

use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grassmann::{class_in_g14, psi, segre_sigma3, GrassClass, GrassError};
use crate::groebner::Ideal;
use crate::polycore::{MatFp, Mono, Poly, PolyRing, PrimeField, UniPoly};
use crate::ratmaps::{apply_projectivity, map_from_system, MapError, RationalMap};
use crate::rng::SeedStream;
use crate::varieties::{ProjVariety, VarietyError};

#[derive(Debug, thiserror::Error)]
pub enum PlaneModelError {
    #[error("cannot parse `{0}` as a comma-separated spec")]
    BadSpec(String),
    #[error("the linear system only reaches P^{0}; a surface needs P^3 or larger")]
    SystemTooSmall(i64),
    #[error("the curve spec asks for more base points than the model has")]
    IncompatibleCurve,
    #[error("elliptic matching unimplemented")]
    EllipticMatching,
    #[error("matching for a curve of genus {0} is unimplemented")]
    HigherGenusMatching(i64),
    #[error("seeded points stayed in special position after {0} attempts")]
    SpecialPosition(u32),
    #[error("no projectivity sending the curve into the Segre threefold was found")]
    NoProjectivity,
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Grass(#[from] GrassError),
}

/// Degree-`a` plane curves with `mults[j]` base points of multiplicity
/// `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneModelSpec {
    pub a: u32,
    pub mults: Vec<u32>,
}

impl PlaneModelSpec {
    pub fn new(a: u32, mults: Vec<u32>) -> Self {
        PlaneModelSpec { a, mults }
    }

    fn point_count(&self) -> i64 {
        self.mults.iter().map(|&c| i64::from(c)).sum()
    }
}

/// A degree-`e` curve through `through[j]` of the multiplicity-`j + 1` base
/// points, passing simply through each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveOnModelSpec {
    pub e: u32,
    pub through: Vec<u32>,
}

impl CurveOnModelSpec {
    pub fn new(e: u32, through: Vec<u32>) -> Self {
        CurveOnModelSpec { e, through }
    }
}

fn parse_counts(s: &str) -> Result<Vec<u32>, PlaneModelError> {
    s.split(',')
        .map(|part| part.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| PlaneModelError::BadSpec(s.to_string()))
}

impl FromStr for PlaneModelSpec {
    type Err = PlaneModelError;

    /// `"4,5,1"` is the spec `(4; 5, 1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_counts(s)?;
        let (&a, rest) = v.split_first().ok_or_else(|| PlaneModelError::BadSpec(s.into()))?;
        if a == 0 {
            return Err(PlaneModelError::BadSpec(s.into()));
        }
        Ok(PlaneModelSpec::new(a, rest.to_vec()))
    }
}

impl FromStr for CurveOnModelSpec {
    type Err = PlaneModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_counts(s)?;
        let (&e, rest) = v.split_first().ok_or_else(|| PlaneModelError::BadSpec(s.into()))?;
        if e == 0 {
            return Err(PlaneModelError::BadSpec(s.into()));
        }
        Ok(CurveOnModelSpec::new(e, rest.to_vec()))
    }
}

/// Expected invariants of the image surface `T` in `P^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModelNumerics {
    pub degree: i64,
    pub genus: i64,
    pub k2: i64,
    pub system_dim: i64,
}

/// Degree on `T` and abstract genus of a curve drawn on the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveNumerics {
    pub degree: i64,
    pub genus: i64,
}

/// Closed-form invariants of the model: blow up the plane, take the strict
/// transform of the system.
pub fn model_numerics(spec: &PlaneModelSpec) -> Result<ModelNumerics, PlaneModelError> {
    let a = i64::from(spec.a);
    let mut degree = a * a;
    let mut genus = (a - 1) * (a - 2) / 2;
    let mut system_dim = (a + 2) * (a + 1) / 2 - 1;
    for (j, &count) in spec.mults.iter().enumerate() {
        let m = j as i64 + 1;
        let c = i64::from(count);
        degree -= c * m * m;
        genus -= c * m * (m - 1) / 2;
        system_dim -= c * m * (m + 1) / 2;
    }
    if system_dim < 3 {
        return Err(PlaneModelError::SystemTooSmall(system_dim));
    }
    Ok(ModelNumerics { degree, genus, k2: 9 - spec.point_count(), system_dim })
}

/// Degree of the curve's image on `T` and its geometric genus.
pub fn curve_numerics(
    model: &PlaneModelSpec,
    curve: &CurveOnModelSpec,
) -> Result<CurveNumerics, PlaneModelError> {
    if curve.through.len() > model.mults.len() {
        return Err(PlaneModelError::IncompatibleCurve);
    }
    let e = i64::from(curve.e);
    let mut degree = e * i64::from(model.a);
    for (j, &count) in curve.through.iter().enumerate() {
        if count > model.mults[j] {
            return Err(PlaneModelError::IncompatibleCurve);
        }
        degree -= i64::from(count) * (j as i64 + 1);
    }
    Ok(CurveNumerics { degree, genus: (e - 1) * (e - 2) / 2 })
}

pub fn plane_ring(field: PrimeField) -> Arc<PolyRing> {
    PolyRing::grevlex(field, &["x0", "x1", "x2"])
}

fn param_ring(field: PrimeField) -> Arc<PolyRing> {
    PolyRing::grevlex(field, &["t0", "t1"])
}

/// A realized model: seeded base points, the linear system as a rational
/// map `P^2 -> P^N`, and its verified image surface.
pub struct PlaneModel {
    pub spec: PlaneModelSpec,
    pub numerics: ModelNumerics,
    /// Base points with their multiplicities, simple points first.
    pub points: Vec<(Vec<u64>, u32)>,
    pub map: RationalMap,
}

impl PlaneModel {
    pub fn surface(&self) -> &ProjVariety {
        self.map.image()
    }
}

/// One row per vanishing condition: all partials of order below the
/// multiplicity, evaluated at the point, as linear forms in the
/// coefficients of a degree-`d` plane curve.
fn vanishing_conditions(
    ring: &Arc<PolyRing>,
    d: u16,
    points: &[(Vec<u64>, u32)],
) -> (Vec<Mono>, MatFp) {
    let monos = ring.monomials_of_degree(d);
    let mut rows = Vec::new();
    for (pt, mult) in points {
        for order in 0..*mult {
            for e0 in 0..=order {
                for e1 in 0..=(order - e0) {
                    let e2 = order - e0 - e1;
                    let mut row = Vec::with_capacity(monos.len());
                    for mono in &monos {
                        let mut f = Poly::from_terms(ring, vec![(*mono, 1)]);
                        for _ in 0..e0 {
                            f = f.derivative(0);
                        }
                        for _ in 0..e1 {
                            f = f.derivative(1);
                        }
                        for _ in 0..e2 {
                            f = f.derivative(2);
                        }
                        row.push(f.eval(pt));
                    }
                    rows.push(row);
                }
            }
        }
    }
    let conditions = if rows.is_empty() {
        MatFp::zero(ring.field, 0, monos.len())
    } else {
        MatFp::from_rows(ring.field, rows)
    };
    (monos, conditions)
}

fn system_through(ring: &Arc<PolyRing>, d: u16, points: &[(Vec<u64>, u32)]) -> Vec<Poly> {
    let (monos, conditions) = vanishing_conditions(ring, d, points);
    conditions
        .kernel()
        .into_iter()
        .map(|v| {
            let terms = monos
                .iter()
                .zip(&v)
                .filter(|&(_, &c)| c != 0)
                .map(|(m, &c)| (*m, c))
                .collect();
            Poly::from_terms(ring, terms)
        })
        .collect()
}

/// Realize the model over seeded random base points and verify the image
/// against the closed-form numerics, reseeding on special position.
pub fn build_model_map(
    spec: &PlaneModelSpec,
    field: PrimeField,
    seeds: &SeedStream,
) -> Result<PlaneModel, PlaneModelError> {
    let numerics = model_numerics(spec)?;
    let ring = plane_ring(field);
    let p = field.characteristic();
    let expected_conditions: i64 = spec
        .mults
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let m = j as i64 + 1;
            i64::from(c) * m * (m + 1) / 2
        })
        .sum();
    const ATTEMPTS: u32 = 6;
    for attempt in 0..ATTEMPTS {
        let child = seeds.child(&format!("model-{attempt}"));
        let mut rng = child.stream("points");
        let mut points: Vec<(Vec<u64>, u32)> = Vec::new();
        for (j, &count) in spec.mults.iter().enumerate() {
            for _ in 0..count {
                loop {
                    let pt = vec![rng.gen_range(0..p), rng.gen_range(0..p), 1];
                    if points.iter().all(|(q, _)| q[..2] != pt[..2]) {
                        points.push((pt, j as u32 + 1));
                        break;
                    }
                }
            }
        }
        let (_, conditions) = vanishing_conditions(&ring, spec.a as u16, &points);
        if points.is_empty() || conditions.rank() as i64 == expected_conditions {
            let forms = system_through(&ring, spec.a as u16, &points);
            if forms.len() as i64 != numerics.system_dim + 1 {
                continue;
            }
            let plane = ProjVariety::new(Ideal::new(ring.clone(), vec![]), child.child("plane"));
            let map = map_from_system(plane, forms, child.child("map"))?;
            let got = map.image().invariants()?;
            if got.dim == 2
                && got.degree == numerics.degree
                && got.sectional_genus == Some(numerics.genus)
            {
                return Ok(PlaneModel { spec: spec.clone(), numerics, points, map });
            }
        }
    }
    Err(PlaneModelError::SpecialPosition(ATTEMPTS))
}

/// Coefficients of a binary form as a polynomial in `t0` (so `t1 = 1`).
fn binary_to_uni(f: &Poly) -> UniPoly {
    let mut coeffs = vec![0u64; f.degree().max(0) as usize + 1];
    for (mono, c) in &f.terms {
        coeffs[mono.e[0] as usize] = *c;
    }
    UniPoly::from_coeffs(f.ring.field, coeffs)
}

fn uni_to_binary(ring: &Arc<PolyRing>, u: &UniPoly, t1_power: u8) -> Poly {
    let n = u.deg().max(0) as u8;
    let terms = (0..=n)
        .filter_map(|j| {
            let c = u.c.get(usize::from(j)).copied().unwrap_or(0);
            (c != 0).then(|| (Mono::from_exps(&[j, n - j + t1_power]), c))
        })
        .collect();
    Poly::from_terms(ring, terms)
}

/// Common divisor of a family of binary forms: the shared `t1` power times
/// the gcd of their dehomogenizations.
fn binary_gcd(ring: &Arc<PolyRing>, comps: &[Poly]) -> Poly {
    let field = ring.field;
    let mut t1_power: Option<u8> = None;
    let mut g = UniPoly::zero(field);
    for f in comps {
        if f.is_zero() {
            continue;
        }
        let v1 = f.terms.iter().map(|(m, _)| m.e[1]).min().unwrap();
        t1_power = Some(t1_power.map_or(v1, |t| t.min(v1)));
        g = g.gcd(&binary_to_uni(f));
    }
    uni_to_binary(ring, &g.monic(), t1_power.unwrap_or(0))
}

/// Strip the common factor cut out by base points from a composed
/// parameterization.
fn divide_out_common(ring: &Arc<PolyRing>, comps: &[Poly]) -> Vec<Poly> {
    let g = binary_gcd(ring, comps);
    if g.degree() <= 0 {
        return comps.to_vec();
    }
    comps.iter().map(|f| if f.is_zero() { f.clone() } else { f.div_exact(&g) }).collect()
}

/// Symmetric matrix of a plane conic.
fn conic_matrix(f: &Poly) -> [[u64; 3]; 3] {
    let field = f.ring.field;
    let half = field.inv(2);
    let mut q = [[0u64; 3]; 3];
    for &(mono, c) in &f.terms {
        let exps: Vec<u8> = mono.e[..3].to_vec();
        match exps.iter().position(|&e| e == 2) {
            Some(i) => q[i][i] = c,
            None => {
                let i = exps.iter().position(|&e| e == 1).unwrap();
                let j = i + 1 + exps[i + 1..].iter().position(|&e| e == 1).unwrap();
                let c2 = field.mul(c, half);
                q[i][j] = c2;
                q[j][i] = c2;
            }
        }
    }
    q
}

fn bilinear(field: PrimeField, q: &[[u64; 3]; 3], x: &[u64], y: &[u64]) -> u64 {
    let mut acc = 0;
    for i in 0..3 {
        for j in 0..3 {
            acc = field.add(acc, field.mul(q[i][j], field.mul(x[i], y[j])));
        }
    }
    acc
}

/// A point of the conic, found by sweeping one coordinate along a random
/// line; every smooth conic over `F_p` has points.
fn point_on_conic(f: &Poly, rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
    let p = f.ring.field.characteristic();
    for _ in 0..8 {
        let x1 = rng.gen_range(0..p);
        for x2 in 0..p {
            if f.eval(&[1, x1, x2]) == 0 {
                return Some(vec![1, x1, x2]);
            }
        }
    }
    None
}

/// Degree-2 parameterization of a smooth conic by the pencil of lines
/// through a point on it.
fn parameterize_conic(
    f: &Poly,
    base: &[u64],
    t_ring: &Arc<PolyRing>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Poly>> {
    let field = f.ring.field;
    let p = field.characteristic();
    let q = conic_matrix(f);
    debug_assert_eq!(bilinear(field, &q, base, base), 0, "base point must lie on the conic");
    for _ in 0..16 {
        let r: Vec<u64> = (0..3).map(|_| rng.gen_range(0..p)).collect();
        let s: Vec<u64> = (0..3).map(|_| rng.gen_range(0..p)).collect();
        let frame = MatFp::from_rows(field, vec![base.to_vec(), r.clone(), s.clone()]);
        if frame.rank() != 3 {
            continue;
        }
        let qrr = bilinear(field, &q, &r, &r);
        let qrs = bilinear(field, &q, &r, &s);
        let qss = bilinear(field, &q, &s, &s);
        let alpha = bilinear(field, &q, base, &r);
        let beta = bilinear(field, &q, base, &s);
        // second intersection of the line through `base` in direction
        // t0 r + t1 s: q(d) base - 2 (base^T Q d) d
        let mut rows = Vec::new();
        for i in 0..3 {
            let two = |x: u64| field.add(x, x);
            rows.push(vec![
                field.sub(field.mul(qrr, base[i]), two(field.mul(alpha, r[i]))),
                field.sub(
                    field.mul(two(qrs), base[i]),
                    two(field.add(field.mul(alpha, s[i]), field.mul(beta, r[i]))),
                ),
                field.sub(field.mul(qss, base[i]), two(field.mul(beta, s[i]))),
            ]);
        }
        let coeff_matrix = MatFp::from_rows(field, rows.clone());
        if coeff_matrix.rank() != 3 {
            continue;
        }
        let comps: Vec<Poly> = rows
            .into_iter()
            .map(|row| {
                let terms = [(2u8, 0u8), (1, 1), (0, 2)]
                    .iter()
                    .zip(&row)
                    .filter(|&(_, &c)| c != 0)
                    .map(|(&(e0, e1), &c)| (Mono::from_exps(&[e0, e1]), c))
                    .collect();
                Poly::from_terms(t_ring, terms)
            })
            .collect();
        if binary_gcd(t_ring, &comps).degree() > 0 {
            continue;
        }
        debug_assert!(f.substitute(t_ring, &comps).is_zero());
        return Some(comps);
    }
    None
}

/// Parameterize a member of the degree-`e` system through the chosen
/// points. Only rational degrees (lines and smooth conics) are handled;
/// the caller screens the genus.
fn parameterize_plane_curve(
    ring: &Arc<PolyRing>,
    t_ring: &Arc<PolyRing>,
    e: u32,
    chosen: &[(Vec<u64>, u32)],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Poly>> {
    let field = ring.field;
    let p = field.characteristic();
    let system = system_through(ring, e as u16, chosen);
    for _ in 0..12 {
        let mut member = Poly::zero(ring);
        for f in &system {
            member = member.add(&f.scale(rng.gen_range(1..p)));
        }
        if member.is_zero() {
            continue;
        }
        match e {
            1 => {
                let coeffs: Vec<u64> = (0..3)
                    .map(|i| member.terms.iter().find(|(m, _)| m.e[i] == 1).map_or(0, |t| t.1))
                    .collect();
                let span = MatFp::from_rows(field, vec![coeffs]).kernel();
                let comps = (0..3)
                    .map(|i| {
                        let terms = [(1u8, 0u8), (0, 1)]
                            .iter()
                            .zip(&span)
                            .filter(|&(_, v)| v[i] != 0)
                            .map(|(&(e0, e1), v)| (Mono::from_exps(&[e0, e1]), v[i]))
                            .collect();
                        Poly::from_terms(t_ring, terms)
                    })
                    .collect();
                return Some(comps);
            }
            2 => {
                let q = conic_matrix(&member);
                if MatFp::from_rows(field, q.iter().map(|r| r.to_vec()).collect()).rank() != 3 {
                    continue;
                }
                let base = match chosen.first() {
                    Some((pt, _)) => pt.clone(),
                    None => point_on_conic(&member, rng)?,
                };
                if let Some(comps) = parameterize_conic(&member, &base, t_ring, rng) {
                    return Some(comps);
                }
            }
            _ => return None,
        }
    }
    None
}

/// Balanced-first splittings `(d1, d2)` of `d` for curves on `P^1 x P^2`,
/// with ties favoring the `P^2` factor. The choice of `d2` is visible in
/// the image: lines-in-a-hyperplane cycles pull back through `psi` to
/// codimension-2 linear spaces meeting the Segre along `P^1 x line`, so
/// the `s_(2,2)` coefficient of the built surface is `deg T - d2`.
fn splittings(d: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (0..=d).map(|d1| (d1, d - d1)).collect();
    out.sort_by_key(|&(d1, d2)| ((d1 - d2).abs(), d1));
    out
}

/// A rational curve on the Segre threefold: images of `P^1` of bidegree
/// `(d1, d2)` into `P^1 x P^2`, pushed through the Segre embedding.
fn segre_curve(
    t_ring: &Arc<PolyRing>,
    d1: i64,
    d2: i64,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly> {
    let p = t_ring.field.characteristic();
    let mut random_form = |d: i64| {
        let terms = (0..=d)
            .filter_map(|j| {
                let c = rng.gen_range(0..p);
                (c != 0).then(|| (Mono::from_exps(&[j as u8, (d - j) as u8]), c))
            })
            .collect();
        Poly::from_terms(t_ring, terms)
    };
    let u: Vec<Poly> = (0..2).map(|_| random_form(d1)).collect();
    let v: Vec<Poly> = (0..3).map(|_| random_form(d2)).collect();
    vec![
        u[0].mul(&v[0]),
        u[1].mul(&v[0]),
        u[0].mul(&v[1]),
        u[1].mul(&v[1]),
        u[0].mul(&v[2]),
        u[1].mul(&v[2]),
        Poly::zero(t_ring),
    ]
}

/// Search for a projectivity of `P^6` sending the parameterized rational
/// curve into the Segre threefold: sample the parameter, solve the linear
/// system `A f(t_i) = lambda_i g(t_i)` for a matching curve `g` on the
/// threefold, then verify the containment exactly.
pub fn find_projectivity(
    curve: &[Poly],
    field: PrimeField,
    seeds: &SeedStream,
) -> Result<MatFp, PlaneModelError> {
    assert_eq!(curve.len(), 7, "the curve must be given in the 7 coordinates of P^6");
    let t_ring = curve.iter().find(|c| !c.is_zero()).expect("zero curve").ring.clone();
    let degree = i64::from(curve.iter().map(Poly::degree).max().unwrap());
    let p = field.characteristic();
    let sigma = segre_sigma3(field, seeds.child("sigma3"));
    const SAMPLES: usize = 9;
    for attempt in 0..10 {
        let mut rng = seeds.stream(&format!("match-{attempt}"));
        for &(d1, d2) in &splittings(degree) {
            let target = segre_curve(&t_ring, d1, d2, &mut rng);
            let mut samples = Vec::with_capacity(SAMPLES);
            let mut guard = 0;
            while samples.len() < SAMPLES && guard < 200 {
                guard += 1;
                let t = rng.gen_range(0..p);
                if samples.iter().any(|(s, _, _): &(u64, Vec<u64>, Vec<u64>)| *s == t) {
                    continue;
                }
                let fv: Vec<u64> = curve.iter().map(|c| c.eval(&[t, 1])).collect();
                let gv: Vec<u64> = target.iter().map(|c| c.eval(&[t, 1])).collect();
                if fv.iter().all(|&x| x == 0) || gv.iter().all(|&x| x == 0) {
                    continue;
                }
                samples.push((t, fv, gv));
            }
            if samples.len() < SAMPLES {
                continue;
            }
            // unknowns: the 49 entries of A, then one scalar per sample
            let mut rows = Vec::new();
            for (i, (_, fv, gv)) in samples.iter().enumerate() {
                for r in 0..7 {
                    let mut row = vec![0u64; 49 + SAMPLES];
                    for c in 0..7 {
                        row[7 * r + c] = fv[c];
                    }
                    row[49 + i] = field.neg(gv[r]);
                    rows.push(row);
                }
            }
            let kernel = MatFp::from_rows(field, rows).kernel();
            if kernel.is_empty() {
                continue;
            }
            for _ in 0..12 {
                let mut x = vec![0u64; 49 + SAMPLES];
                for basis in &kernel {
                    let c = rng.gen_range(0..p);
                    for (xi, bi) in x.iter_mut().zip(basis) {
                        *xi = field.add(*xi, field.mul(c, *bi));
                    }
                }
                let a = MatFp::from_rows(
                    field,
                    (0..7).map(|r| x[7 * r..7 * r + 7].to_vec()).collect(),
                );
                if a.rank() != 7 {
                    continue;
                }
                let moved: Vec<Poly> = (0..7)
                    .map(|r| {
                        let mut acc = Poly::zero(&t_ring);
                        for c in 0..7 {
                            acc = acc.add(&curve[c].scale(a[(r, c)]));
                        }
                        acc
                    })
                    .collect();
                if sigma
                    .raw_ideal()
                    .gens
                    .iter()
                    .all(|g| g.substitute(&t_ring, &moved).is_zero())
                {
                    return Ok(a);
                }
            }
        }
    }
    Err(PlaneModelError::NoProjectivity)
}

/// The finished construction: the surface `S = psi(sigma(T))` in `G(1,4)`
/// with its measured and predicted invariants.
pub struct SurfaceBuild {
    pub plane_model: PlaneModel,
    pub curve: CurveNumerics,
    pub projectivity: MatFp,
    pub surface: ProjVariety,
    pub class: GrassClass,
    pub degree: i64,
    pub genus: i64,
    /// `(2H - C)^2` on the model.
    pub expected_degree: i64,
    /// Genus of `2H - C` on the model.
    pub expected_genus: i64,
    /// Whether `S` kept the model's degree and sectional genus.
    pub isomorphic_image: bool,
    /// The model's `K^2`, carried over only for an isomorphic image.
    pub k2: Option<i64>,
}

/// Predicted invariants of the hyperplane class `2H - C` of the image in
/// `G(1,4)`, from intersection theory on the blown-up plane.
fn image_predictions(
    model: &PlaneModelSpec,
    curve: &CurveOnModelSpec,
) -> (i64, i64) {
    let base = 2 * i64::from(model.a) - i64::from(curve.e);
    let mut deg = base * base;
    let mut dk = -3 * base;
    for (j, &count) in model.mults.iter().enumerate() {
        let m = j as i64 + 1;
        let through = curve.through.get(j).copied().unwrap_or(0) as i64;
        let hit = 2 * m - 1;
        deg -= through * hit * hit + (i64::from(count) - through) * 4 * m * m;
        dk += through * hit + (i64::from(count) - through) * 2 * m;
    }
    (deg, 1 + (deg + dk) / 2)
}

/// Run the whole pipeline: realize the model, draw and parameterize the
/// curve, match it into the Segre threefold, and push the moved model onto
/// a surface of `G(1,4)` by the inverse projection.
pub fn build_surface_in_g14(
    model_spec: &PlaneModelSpec,
    curve_spec: &CurveOnModelSpec,
    field: PrimeField,
    seeds: &SeedStream,
) -> Result<SurfaceBuild, PlaneModelError> {
    let curve = curve_numerics(model_spec, curve_spec)?;
    match curve.genus {
        0 => {}
        1 => return Err(PlaneModelError::EllipticMatching),
        g => return Err(PlaneModelError::HigherGenusMatching(g)),
    }
    let (expected_degree, expected_genus) = image_predictions(model_spec, curve_spec);
    const ATTEMPTS: u32 = 3;
    for attempt in 0..ATTEMPTS {
        let ch = seeds.child(&format!("build-{attempt}"));
        let model = build_model_map(model_spec, field, &ch.child("model"))?;
        // the curve meets each chosen base point simply, whatever the
        // model's multiplicity there
        let chosen: Vec<(Vec<u64>, u32)> = model
            .spec
            .mults
            .iter()
            .enumerate()
            .flat_map(|(j, _)| {
                let want = curve_spec.through.get(j).copied().unwrap_or(0) as usize;
                model
                    .points
                    .iter()
                    .filter(move |(_, m)| *m == j as u32 + 1)
                    .take(want)
                    .map(|(pt, _)| (pt.clone(), 1))
            })
            .collect();
        let t_ring = param_ring(field);
        let mut rng = ch.stream("curve");
        let Some(plane_param) = parameterize_plane_curve(
            &plane_ring(field),
            &t_ring,
            curve_spec.e,
            &chosen,
            &mut rng,
        ) else {
            continue;
        };
        let composed: Vec<Poly> =
            model.map.forms().iter().map(|f| f.substitute(&t_ring, &plane_param)).collect();
        let mut comps = divide_out_common(&t_ring, &composed);
        comps.resize(7, Poly::zero(&t_ring));
        if i64::from(comps.iter().map(Poly::degree).max().unwrap()) != curve.degree {
            continue;
        }
        let a_mat = match find_projectivity(&comps, field, &ch.child("sigma")) {
            Ok(a) => a,
            Err(PlaneModelError::NoProjectivity) => continue,
            Err(e) => return Err(e),
        };
        let a_inv = a_mat.inverse().expect("full-rank projectivity");
        let psi_map = psi(field, ch.child("psi"));
        let segre = psi_map.source().ring().clone();
        let images: Vec<Poly> =
            (0..model.surface().ring().nvars()).map(|k| Poly::var(&segre, k)).collect();
        let mut gens: Vec<Poly> = model
            .surface()
            .ideal()
            .gens
            .iter()
            .map(|g| g.substitute(&segre, &images))
            .collect();
        gens.extend((model.surface().ring().nvars()..7).map(|k| Poly::var(&segre, k)));
        let moved = apply_projectivity(&Ideal::new(segre.clone(), gens), &a_inv);
        let moved = ProjVariety::new(moved, ch.child("moved"));
        let s = psi_map.restrict_to(moved)?.image().clone();
        let got = s.invariants()?;
        if got.dim != 2 {
            continue;
        }
        let Some(genus) = got.sectional_genus else {
            continue;
        };
        let class = class_in_g14(&s, &ch.child("class"))?;
        let isomorphic_image =
            got.degree == model.numerics.degree && genus == model.numerics.genus;
        let k2 = isomorphic_image.then_some(model.numerics.k2);
        return Ok(SurfaceBuild {
            plane_model: model,
            curve,
            projectivity: a_mat,
            degree: got.degree,
            genus,
            surface: s,
            class,
            expected_degree,
            expected_genus,
            isomorphic_image,
            k2,
        });
    }
    Err(PlaneModelError::SpecialPosition(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::{graded_piece_dim, trim_linear_span};

    fn field() -> PrimeField {
        PrimeField::default_field()
    }

    #[test]
    fn model_numerics_match_the_catalog() {
        let rows: [(&str, (i64, i64, i64, i64)); 5] = [
            ("4,5,1", (7, 2, 3, 6)),
            ("6,4,6", (8, 4, -1, 5)),
            ("3,0,1", (5, 0, 8, 6)),
            ("2", (4, 0, 9, 5)),
            ("7,0,6,2", (7, 3, 1, 5)),
        ];
        for (spec, (degree, genus, k2, system_dim)) in rows {
            let got = model_numerics(&spec.parse().unwrap()).unwrap();
            assert_eq!(
                got,
                ModelNumerics { degree, genus, k2, system_dim },
                "spec {spec}"
            );
        }
        let plane: PlaneModelSpec = "1".parse().unwrap();
        assert!(matches!(
            model_numerics(&plane),
            Err(PlaneModelError::SystemTooSmall(2))
        ));
    }

    #[test]
    fn curve_numerics_match_the_catalog() {
        let rows: [(&str, &str, (i64, i64)); 3] = [
            ("4,5,1", "2,3,0", (5, 0)),
            ("7,0,6,2", "2,0,5,0", (4, 0)),
            ("6,4,6", "3,3,5", (5, 1)),
        ];
        for (m, c, (degree, genus)) in rows {
            let got = curve_numerics(&m.parse().unwrap(), &c.parse().unwrap()).unwrap();
            assert_eq!(got, CurveNumerics { degree, genus }, "curve {c} on {m}");
        }
        let too_many = curve_numerics(&"4,5,1".parse().unwrap(), &"2,6".parse().unwrap());
        assert!(matches!(too_many, Err(PlaneModelError::IncompatibleCurve)));
    }

    #[test]
    fn specs_parse_from_comma_lists() {
        assert_eq!("4,5,1".parse::<PlaneModelSpec>().unwrap(), PlaneModelSpec::new(4, vec![5, 1]));
        assert_eq!(
            "2,3,0".parse::<CurveOnModelSpec>().unwrap(),
            CurveOnModelSpec::new(2, vec![3, 0])
        );
        assert!("".parse::<PlaneModelSpec>().is_err());
        assert!("4,x".parse::<PlaneModelSpec>().is_err());
        assert!("0,1".parse::<PlaneModelSpec>().is_err());
    }

    #[test]
    fn nonrational_curves_are_refused() {
        let model: PlaneModelSpec = "6,4,6".parse().unwrap();
        let elliptic = build_surface_in_g14(
            &model,
            &"3,3,5".parse().unwrap(),
            field(),
            &SeedStream::new(7),
        );
        assert!(matches!(elliptic, Err(PlaneModelError::EllipticMatching)));
        assert_eq!(
            PlaneModelError::EllipticMatching.to_string(),
            "elliptic matching unimplemented"
        );
        let quartic = build_surface_in_g14(
            &model,
            &"4,4,6".parse().unwrap(),
            field(),
            &SeedStream::new(7),
        );
        assert!(matches!(quartic, Err(PlaneModelError::HigherGenusMatching(3))));
    }

    #[test]
    fn veronese_and_scroll_models_build() {
        let veronese = build_model_map(&"2".parse().unwrap(), field(), &SeedStream::new(11));
        let v = veronese.unwrap();
        let got = v.surface().invariants().unwrap();
        assert_eq!((got.dim, got.degree, got.sectional_genus), (2, 4, Some(0)));
        assert_eq!(v.surface().ring().nvars(), 6);

        let scroll = build_model_map(&"3,0,1".parse().unwrap(), field(), &SeedStream::new(11));
        let s = scroll.unwrap();
        let got = s.surface().invariants().unwrap();
        assert_eq!((got.dim, got.degree, got.sectional_genus), (2, 5, Some(0)));
        assert_eq!(s.surface().ring().nvars(), 7);
    }

    #[test]
    fn conics_parameterize_onto_themselves() {
        let ring = plane_ring(field());
        let t_ring = param_ring(field());
        let seeds = SeedStream::new(23);
        let mut rng = seeds.stream("pts");
        let pts: Vec<(Vec<u64>, u32)> = vec![
            (vec![1, 0, 0], 1),
            (vec![0, 1, 0], 1),
            (vec![5, 3, 1], 1),
        ];
        let comps =
            parameterize_plane_curve(&ring, &t_ring, 2, &pts, &mut rng).expect("a smooth conic");
        assert!(comps.iter().all(|c| c.degree() == 2));
        // the three binary quadrics must be independent: the image is the
        // conic, not a line or point
        let rows: Vec<Vec<u64>> = comps
            .iter()
            .map(|c| (0..3u64).map(|j| c.eval(&[j, 1])).collect())
            .collect();
        assert_eq!(MatFp::from_rows(field(), rows).rank(), 3);
    }

    #[test]
    fn a_line_matches_a_ruling_of_the_segre() {
        let t_ring = param_ring(field());
        let mut curve = vec![Poly::zero(&t_ring); 7];
        curve[0] = Poly::var(&t_ring, 0);
        curve[3] = Poly::var(&t_ring, 1);
        curve[5] = Poly::var(&t_ring, 0).add(&Poly::var(&t_ring, 1));
        let a = find_projectivity(&curve, field(), &SeedStream::new(31)).unwrap();
        assert_eq!(a.rank(), 7);
        let sigma = segre_sigma3(field(), SeedStream::new(1));
        let moved: Vec<Poly> = (0..7)
            .map(|r| {
                let mut acc = Poly::zero(&t_ring);
                for c in 0..7 {
                    acc = acc.add(&curve[c].scale(a[(r, c)]));
                }
                acc
            })
            .collect();
        for g in &sigma.raw_ideal().gens {
            assert!(g.substitute(&t_ring, &moved).is_zero());
        }
    }

    #[test]
    fn scroll_curve_pair_builds_a_degree_seven_surface() {
        let build = build_surface_in_g14(
            &"3,0,1".parse().unwrap(),
            &"2,0,1".parse().unwrap(),
            field(),
            &SeedStream::new(41),
        )
        .unwrap();
        assert_eq!((build.degree, build.genus), (7, 0));
        assert_eq!((build.expected_degree, build.expected_genus), (7, 0));
        assert_eq!(build.class, GrassClass { a: 4, b: 3 });
        assert!(!build.isomorphic_image);
        assert_eq!(build.k2, None);
    }

    #[test]
    fn table_pair_builds_the_degree_nine_surface() {
        let build = build_surface_in_g14(
            &"4,5,1".parse().unwrap(),
            &"2,3,0".parse().unwrap(),
            field(),
            &SeedStream::new(41),
        )
        .unwrap();
        assert_eq!((build.degree, build.genus), (9, 2));
        assert_eq!((build.expected_degree, build.expected_genus), (9, 2));
        assert_eq!(build.class, GrassClass { a: 5, b: 4 });
        // spans a P^8, where 19 quadrics cut it out
        let trimmed = trim_linear_span(build.surface.ideal());
        assert_eq!(trimmed.ring.nvars(), 9);
        assert_eq!(graded_piece_dim(&trimmed, 2), 19);
    }

    #[test]
    fn second_table_pair_builds_the_degree_eleven_surface() {
        let build = build_surface_in_g14(
            &"7,0,6,2".parse().unwrap(),
            &"2,0,5,0".parse().unwrap(),
            field(),
            &SeedStream::new(41),
        )
        .unwrap();
        assert_eq!((build.degree, build.genus), (11, 4));
        assert_eq!((build.expected_degree, build.expected_genus), (11, 4));
        assert_eq!(build.class, GrassClass { a: 6, b: 5 });
    }

    #[test]
    fn reruns_rebuild_the_same_surface() {
        let run = |seed| {
            let b = build_surface_in_g14(
                &"3,0,1".parse().unwrap(),
                &"2,0,1".parse().unwrap(),
                field(),
                &SeedStream::new(seed),
            )
            .unwrap();
            b.surface.ideal().gens.iter().map(ToString::to_string).collect::<Vec<_>>()
        };
        assert_eq!(run(99), run(99));
    }
}
