//! Shared oracles and generators for the integration tests.
//!
//! Nothing here calls into the morphism algebra of the library: composites
//! are recomputed with plain dense matrices over `Z[q]/(q^n - 1)` restricted
//! to monomial entries, and basis re-indexings are recomputed from paths.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use witnesskit::backend::Path;
use witnesskit::{compile, denote, Atom, BackendConfig, ConcreteMorphism, Env, GenKind, Shape, Witness};

/// Dense matrix whose cells are either zero or `q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub n: u32,
    cells: Vec<Option<u32>>,
}

impl Dense {
    pub fn zero(rows: usize, cols: usize, n: u32) -> Dense {
        Dense {
            rows,
            cols,
            n,
            cells: vec![None; rows * cols],
        }
    }

    pub fn identity(dim: usize, n: u32) -> Dense {
        let mut d = Dense::zero(dim, dim, n);
        for i in 0..dim {
            d.set(i, i, Some(0));
        }
        d
    }

    pub fn of(m: &ConcreteMorphism) -> Dense {
        let mut d = Dense::zero(m.target_dim(), m.source_dim(), m.phase_order());
        for e in m.entries() {
            d.set(e.row, e.col, Some(e.phase));
        }
        d
    }

    pub fn get(&self, r: usize, c: usize) -> Option<u32> {
        self.cells[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Option<u32>) {
        self.cells[r * self.cols + c] = v.map(|k| k % self.n);
    }

    /// `self * other`, i.e. `other` first. Panics if a cell would need a sum
    /// of two roots of unity, which never happens for monomial matrices.
    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        assert_eq!(self.n, other.n);
        let mut out = Dense::zero(self.rows, other.cols, self.n);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut cell = None;
                for k in 0..self.cols {
                    if let (Some(a), Some(b)) = (self.get(i, k), other.get(k, j)) {
                        assert!(cell.is_none(), "product is not monomial at ({i},{j})");
                        cell = Some(a + b);
                    }
                }
                out.set(i, j, cell);
            }
        }
        out
    }

    pub fn kron(&self, other: &Dense) -> Dense {
        assert_eq!(self.n, other.n);
        let mut out = Dense::zero(self.rows * other.rows, self.cols * other.cols, self.n);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let Some(a) = self.get(i1, j1) else { continue };
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        if let Some(b) = other.get(i2, j2) {
                            out.set(i1 * other.rows + i2, j1 * other.cols + j2, Some(a + b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Dense) -> Dense {
        assert_eq!(self.n, other.n);
        let mut out = Dense::zero(self.rows + other.rows, self.cols + other.cols, self.n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Conjugate transpose, which inverts a monomial matrix with unit entries.
    pub fn adjoint(&self) -> Dense {
        let mut out = Dense::zero(self.cols, self.rows, self.n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).map(|k| (self.n - k % self.n) % self.n));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Dense::identity(self.rows, self.n) && self.rows == self.cols
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).filter_map(move |j| self.get(i, j).map(|k| (i, j, k))))
    }
}

pub fn v(name: &str) -> Shape {
    Shape::var(name)
}

pub fn s(a: &Shape, b: &Shape) -> Shape {
    Shape::sum(a.clone(), b.clone())
}

pub fn p(a: &Shape, b: &Shape) -> Shape {
    Shape::prod(a.clone(), b.clone())
}

pub fn gen(kind: GenKind, args: &[&Shape]) -> Witness {
    Witness::gen(kind, args.iter().map(|a| (*a).clone()))
}

pub fn env_of(bindings: &[(&str, &[(&str, i64)])]) -> Env {
    let mut env = Env::new();
    for (var, atoms) in bindings {
        env = env.with(var, atoms).expect("test environments are well formed");
    }
    env
}

pub fn random_env(rng: &mut ChaCha8Rng, vars: &[&str], max_dim: usize, degrees: std::ops::RangeInclusive<i64>) -> Env {
    let mut env = Env::new();
    for var in vars {
        let size = rng.random_range(0..=max_dim);
        let atoms = (0..size)
            .map(|i| Atom::new(format!("{}{i}", var.to_lowercase()), rng.random_range(degrees.clone())))
            .collect();
        env.bind(*var, atoms).unwrap();
    }
    env
}

pub fn random_shape(rng: &mut ChaCha8Rng, depth: usize, vars: &[&str]) -> Shape {
    let leaf = |rng: &mut ChaCha8Rng| match rng.random_range(0..10) {
        0 => Shape::Zero,
        1 => Shape::One,
        _ => v(vars.choose(rng).unwrap()),
    };
    if depth == 0 || rng.random_bool(0.3) {
        return leaf(rng);
    }
    let l = random_shape(rng, depth - 1, vars);
    let r = random_shape(rng, depth - 1, vars);
    if rng.random_bool(0.5) {
        Shape::sum(l, r)
    } else {
        Shape::prod(l, r)
    }
}

/// Invertible generator instances whose source is exactly `src`.
pub fn generators_from(src: &Shape, rng: &mut ChaCha8Rng, vars: &[&str]) -> Vec<Witness> {
    use GenKind::*;
    let mut out = vec![
        gen(LPlusInv, &[src]),
        gen(RPlusInv, &[src]),
        gen(LTimesInv, &[src]),
        gen(RTimesInv, &[src]),
    ];
    match src {
        Shape::Zero => {
            let x = v(vars.choose(rng).unwrap());
            out.push(gen(ZeroLInv, &[&x]));
            out.push(gen(ZeroRInv, &[&x]));
        }
        Shape::Sum(l, r) => {
            out.push(gen(BPlus, &[l, r]));
            if let Shape::Sum(a, b) = &**l {
                out.push(gen(APlus, &[a, b, r]));
            }
            if let Shape::Sum(b, c) = &**r {
                out.push(gen(APlusInv, &[l, b, c]));
            }
            if **l == Shape::Zero {
                out.push(gen(LPlus, &[r]));
            }
            if **r == Shape::Zero {
                out.push(gen(RPlus, &[l]));
            }
            if let (Shape::Prod(a, b), Shape::Prod(a2, c)) = (&**l, &**r) {
                if a == a2 {
                    out.push(gen(DistLInv, &[a, b, c]));
                }
                if b == c {
                    out.push(gen(DistRInv, &[a, a2, b]));
                }
            }
        }
        Shape::Prod(l, r) => {
            out.push(gen(BTimesOver, &[l, r]));
            out.push(gen(BTimesUnder, &[l, r]));
            if let Shape::Prod(a, b) = &**l {
                out.push(gen(ATimes, &[a, b, r]));
            }
            if let Shape::Prod(b, c) = &**r {
                out.push(gen(ATimesInv, &[l, b, c]));
            }
            if let Shape::Sum(b, c) = &**r {
                out.push(gen(DistL, &[l, b, c]));
            }
            if let Shape::Sum(a, b) = &**l {
                out.push(gen(DistR, &[a, b, r]));
            }
            match (&**l, &**r) {
                (Shape::One, x) => out.push(gen(LTimes, &[x])),
                (x, Shape::One) => out.push(gen(RTimes, &[x])),
                _ => {}
            }
            match (&**l, &**r) {
                (Shape::Zero, x) => out.push(gen(ZeroL, &[x])),
                (x, Shape::Zero) => out.push(gen(ZeroR, &[x])),
                _ => {}
            }
        }
        _ => {}
    }
    out
}

fn target(w: &Witness) -> Shape {
    w.typecheck().expect("generated terms are well typed").target
}

/// A random invertible term out of `src` whose syntax tree has depth at most
/// `depth` (a bare generator has depth 0).
pub fn random_invertible(rng: &mut ChaCha8Rng, src: &Shape, depth: usize, vars: &[&str]) -> Witness {
    let pick_gen = |rng: &mut ChaCha8Rng| {
        let gens = generators_from(src, rng, vars);
        // Prefer the structure-consuming generators over the four that
        // always apply and only grow the shape.
        if gens.len() > 4 && rng.random_bool(0.75) {
            gens[4..].choose(rng).unwrap().clone()
        } else {
            gens.choose(rng).unwrap().clone()
        }
    };
    if depth == 0 {
        return if rng.random_bool(0.1) {
            Witness::id(src.clone())
        } else {
            pick_gen(rng)
        };
    }
    match (rng.random_range(0..10), src) {
        (0..=3, _) => {
            let first = random_invertible(rng, src, depth - 1, vars);
            let second = random_invertible(rng, &target(&first), depth - 1, vars);
            first.then(second)
        }
        (4..=5, Shape::Sum(l, r)) => Witness::sum_m(
            random_invertible(rng, l, depth - 1, vars),
            random_invertible(rng, r, depth - 1, vars),
        ),
        (4..=5, Shape::Prod(l, r)) => Witness::prod_m(
            random_invertible(rng, l, depth - 1, vars),
            random_invertible(rng, r, depth - 1, vars),
        ),
        _ => pick_gen(rng),
    }
}

pub fn depth(w: &Witness) -> usize {
    match w {
        Witness::Id(_) | Witness::Gen(_) => 0,
        Witness::Comp(a, b) | Witness::SumM(a, b) | Witness::ProdM(a, b) | Witness::Copair(a, b) => {
            1 + depth(a).max(depth(b))
        }
    }
}

/// Checks at every node of `term` that the compiled matrix is the dense
/// product, Kronecker product or block sum of its children's.
pub fn check_functorial(term: &Witness, env: &Env, cfg: &BackendConfig) -> Result<Dense, String> {
    let whole = Dense::of(&compile(term, env, cfg).map_err(|e| e.to_string())?);
    let expected = match term {
        Witness::Id(shape) => Some(Dense::identity(
            shape.cardinality(env).map_err(|e| e.to_string())?,
            cfg.phase_order(),
        )),
        Witness::Gen(_) => None,
        Witness::Comp(g, f) => Some(check_functorial(g, env, cfg)?.mul(&check_functorial(f, env, cfg)?)),
        Witness::SumM(f, g) => Some(check_functorial(f, env, cfg)?.block_diag(&check_functorial(g, env, cfg)?)),
        Witness::ProdM(f, g) => Some(check_functorial(f, env, cfg)?.kron(&check_functorial(g, env, cfg)?)),
        Witness::Copair(f, g) => {
            let (f, g) = (check_functorial(f, env, cfg)?, check_functorial(g, env, cfg)?);
            let mut h = Dense::zero(f.rows, f.cols + g.cols, f.n);
            for (i, j, k) in f.nonzero() {
                h.set(i, j, Some(k));
            }
            for (i, j, k) in g.nonzero() {
                h.set(i, f.cols + j, Some(k));
            }
            Some(h)
        }
    };
    match expected {
        Some(e) if e != whole => Err(format!("compile is not compositional at `{term}`")),
        _ => Ok(whole),
    }
}

/// Monomials of the full expansion, left factor major, computed directly.
pub fn expand(shape: &Shape) -> Vec<Vec<String>> {
    match shape {
        Shape::Var(x) => vec![vec![x.clone()]],
        Shape::Zero => vec![],
        Shape::One => vec![vec![]],
        Shape::Sum(l, r) => {
            let mut out = expand(l);
            out.extend(expand(r));
            out
        }
        Shape::Prod(l, r) => {
            let (ls, rs) = (expand(l), expand(r));
            let mut out = Vec::new();
            for a in &ls {
                for b in &rs {
                    out.push([a.clone(), b.clone()].concat());
                }
            }
            out
        }
    }
}

/// Number of monomials in `expand(shape)`.
fn count(shape: &Shape) -> usize {
    match shape {
        Shape::Var(_) | Shape::One => 1,
        Shape::Zero => 0,
        Shape::Sum(l, r) => count(l) + count(r),
        Shape::Prod(l, r) => count(l) * count(r),
    }
}

/// Which monomial of `expand(shape)` a basis path lands in, and the atom
/// labels it picks for that monomial's factors.
fn locate(shape: &Shape, path: &Path) -> (usize, Vec<String>) {
    match (shape, path) {
        (Shape::Var(_), Path::Atom(label)) => (0, vec![label.clone()]),
        (Shape::One, Path::Unit) => (0, vec![]),
        (Shape::Sum(l, _), Path::Left(q)) => locate(l, q),
        (Shape::Sum(l, r), Path::Right(q)) => {
            let (i, atoms) = locate(r, q);
            (count(l) + i, atoms)
        }
        (Shape::Prod(l, r), Path::Pair(a, b)) => {
            let (i, mut xs) = locate(l, a);
            let (j, ys) = locate(r, b);
            xs.extend(ys);
            (i * count(r) + j, xs)
        }
        _ => panic!("path {path} does not belong to shape {shape}"),
    }
}

/// The basis bijection from `shape` to its left-major expansion, found by
/// matching each source basis vector with the target vector that picks the
/// same atoms from the same monomial.
pub fn expansion_oracle(shape: &Shape, env: &Env, cfg: &BackendConfig) -> Vec<usize> {
    let monos = expand(shape);
    let sizes: Vec<usize> = monos
        .iter()
        .map(|m| m.iter().map(|x| env.atoms(x).unwrap().len()).product())
        .collect();
    let label_index: BTreeMap<(&str, &str), usize> = env
        .vars()
        .flat_map(|x| {
            env.atoms(x)
                .unwrap()
                .iter()
                .enumerate()
                .map(move |(i, a)| ((x, a.label.as_str()), i))
        })
        .collect();
    denote(shape, env, cfg)
        .unwrap()
        .iter()
        .map(|b| {
            let (m, labels) = locate(shape, &b.path);
            let offset: usize = sizes[..m].iter().sum();
            let within = monos[m].iter().zip(&labels).fold(0, |acc, (x, label)| {
                acc * env.atoms(x).unwrap().len() + label_index[&(x.as_str(), label.as_str())]
            });
            offset + within
        })
        .collect()
}

/// Every shape with at most `max_nodes` nodes built from `leaves`.
pub fn all_shapes(max_nodes: usize, leaves: &[Shape]) -> Vec<Shape> {
    // by_size[k] holds the shapes with exactly k nodes.
    let mut by_size: Vec<Vec<Shape>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes >= 1 {
        by_size[1] = leaves.to_vec();
    }
    for k in 3..=max_nodes {
        let mut here = Vec::new();
        for left in 1..k - 1 {
            let right = k - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    here.push(s(a, b));
                    here.push(p(a, b));
                }
            }
        }
        by_size[k] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// All environments binding each of `vars` to 0..=max_dim atoms; atom `i`
/// of the `j`-th variable gets degree `i + j + 1` so both parities occur.
pub fn all_envs(vars: &[&str], max_dim: usize) -> Vec<Env> {
    let mut envs = vec![Env::new()];
    for (j, var) in vars.iter().enumerate() {
        let mut next = Vec::new();
        for env in &envs {
            for size in 0..=max_dim {
                let atoms = (0..size)
                    .map(|i| Atom::new(format!("{}{i}", var.to_lowercase()), (i + j + 1) as i64))
                    .collect();
                let mut e = env.clone();
                e.bind(*var, atoms).unwrap();
                next.push(e);
            }
        }
        envs = next;
    }
    envs
}
