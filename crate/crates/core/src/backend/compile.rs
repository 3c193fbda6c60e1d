use crate::shape::Env;
use crate::witness::{Gen, GenKind, Witness};

use super::morphism::ConcreteMorphism;
use super::{degrees, BackendConfig, CompileError, Fault};

/// Compiles a witness term to its matrix over the fixed bases of its source
/// and target.
///
/// Generators are compiled by index arithmetic on the block/Kronecker layout;
/// nothing here enumerates basis paths.
pub fn compile(term: &Witness, env: &Env, cfg: &BackendConfig) -> Result<ConcreteMorphism, CompileError> {
    term.typecheck()?;
    compile_checked(term, env, cfg)
}

fn compile_checked(term: &Witness, env: &Env, cfg: &BackendConfig) -> Result<ConcreteMorphism, CompileError> {
    let n = cfg.phase_order();
    let left_first = !cfg.flips_sums();
    Ok(match term {
        Witness::Id(s) => ConcreteMorphism::identity(s.cardinality(env)?, n),
        Witness::Gen(g) => compile_gen(g, env, cfg)?,
        Witness::Comp(g, f) => {
            let f = compile_checked(f, env, cfg)?;
            let g = compile_checked(g, env, cfg)?;
            g.after(&f).expect("typechecked composition has matching dimensions")
        }
        Witness::SumM(f, g) => compile_checked(f, env, cfg)?
            .direct_sum_ordered(&compile_checked(g, env, cfg)?, left_first)
            .expect("same backend"),
        Witness::ProdM(f, g) => compile_checked(f, env, cfg)?
            .tensor(&compile_checked(g, env, cfg)?)
            .expect("same backend"),
        Witness::Copair(f, g) => compile_checked(f, env, cfg)?
            .copair_ordered(&compile_checked(g, env, cfg)?, left_first)
            .expect("typechecked copair has matching targets"),
    })
}

/// Index of a summand element in the layout of `left + right`.
#[derive(Clone, Copy)]
struct SumLayout {
    left: usize,
    right: usize,
    flipped: bool,
}

impl SumLayout {
    fn new(left: usize, right: usize, cfg: &BackendConfig) -> SumLayout {
        SumLayout {
            left,
            right,
            flipped: cfg.flips_sums(),
        }
    }

    fn len(&self) -> usize {
        self.left + self.right
    }

    fn inl(&self, i: usize) -> usize {
        if self.flipped {
            self.right + i
        } else {
            i
        }
    }

    fn inr(&self, j: usize) -> usize {
        if self.flipped {
            j
        } else {
            self.left + j
        }
    }
}

fn compile_gen(g: &Gen, env: &Env, cfg: &BackendConfig) -> Result<ConcreteMorphism, CompileError> {
    use GenKind::*;
    let n = cfg.phase_order();
    let dims = g
        .args()
        .iter()
        .map(|s| s.cardinality(env))
        .collect::<Result<Vec<_>, _>>()?;
    let sum = |l: usize, r: usize| SumLayout::new(l, r, cfg);
    let unphased = |src: usize, tgt: usize, pairs: Vec<(usize, usize)>| {
        ConcreteMorphism::from_map(src, tgt, n, pairs.into_iter().map(|(c, r)| (c, r, 0)))
    };

    let m = match g.kind() {
        APlus => {
            let (a, b, c) = (dims[0], dims[1], dims[2]);
            let (ab, src) = (sum(a, b), sum(a + b, c));
            let (bc, tgt) = (sum(b, c), sum(a, b + c));
            let mut pairs = Vec::with_capacity(a + b + c);
            pairs.extend((0..a).map(|x| (src.inl(ab.inl(x)), tgt.inl(x))));
            pairs.extend((0..b).map(|y| (src.inl(ab.inr(y)), tgt.inr(bc.inl(y)))));
            pairs.extend((0..c).map(|z| (src.inr(z), tgt.inr(bc.inr(z)))));
            unphased(src.len(), tgt.len(), pairs)
        }
        ATimes => {
            let (a, b, c) = (dims[0], dims[1], dims[2]);
            let mut pairs = Vec::with_capacity(a * b * c);
            for i in 0..a {
                for j in 0..b {
                    for k in 0..c {
                        pairs.push(((i * b + j) * c + k, i * (b * c) + (j * c + k)));
                    }
                }
            }
            unphased(a * b * c, a * b * c, pairs)
        }
        BPlus => {
            let (a, b) = (dims[0], dims[1]);
            let (src, tgt) = (sum(a, b), sum(b, a));
            let pairs = (0..a)
                .map(|x| (src.inl(x), tgt.inr(x)))
                .chain((0..b).map(|y| (src.inr(y), tgt.inl(y))))
                .collect();
            unphased(a + b, a + b, pairs)
        }
        BTimesOver | BTimesUnder => {
            let (a, b) = (dims[0], dims[1]);
            let sign = match (g.kind(), cfg.fault()) {
                (BTimesOver, _) => 1,
                (_, Some(Fault::DropUnderPhase)) => 0,
                _ => -1,
            };
            let deg_a = degrees(&g.args()[0], env, cfg)?;
            let deg_b = degrees(&g.args()[1], env, cfg)?;
            let mut map = Vec::with_capacity(a * b);
            for (i, da) in deg_a.iter().enumerate() {
                for (j, db) in deg_b.iter().enumerate() {
                    map.push((i * b + j, j * a + i, sign * da * db));
                }
            }
            ConcreteMorphism::from_map(a * b, a * b, n, map)
        }
        LPlus => {
            let a = dims[0];
            let src = sum(0, a);
            unphased(a, a, (0..a).map(|x| (src.inr(x), x)).collect())
        }
        RPlus => {
            let a = dims[0];
            let src = sum(a, 0);
            unphased(a, a, (0..a).map(|x| (src.inl(x), x)).collect())
        }
        // I*A and A*I share A's layout.
        LTimes | RTimes => ConcreteMorphism::identity(dims[0], n),
        DistL => {
            let (a, b, c) = (dims[0], dims[1], dims[2]);
            let inner = sum(b, c);
            let tgt = if cfg.fault() == Some(Fault::DistLBlockSwap) {
                SumLayout {
                    flipped: !inner.flipped,
                    ..sum(a * b, a * c)
                }
            } else {
                sum(a * b, a * c)
            };
            let mut pairs = Vec::with_capacity(a * (b + c));
            for i in 0..a {
                pairs.extend((0..b).map(|y| (i * (b + c) + inner.inl(y), tgt.inl(i * b + y))));
                pairs.extend((0..c).map(|z| (i * (b + c) + inner.inr(z), tgt.inr(i * c + z))));
            }
            unphased(a * (b + c), a * (b + c), pairs)
        }
        DistR => {
            let (a, b, c) = (dims[0], dims[1], dims[2]);
            let (outer, tgt) = (sum(a, b), sum(a * c, b * c));
            let mut pairs = Vec::with_capacity((a + b) * c);
            for k in 0..c {
                pairs.extend((0..a).map(|x| (outer.inl(x) * c + k, tgt.inl(x * c + k))));
                pairs.extend((0..b).map(|y| (outer.inr(y) * c + k, tgt.inr(y * c + k))));
            }
            unphased((a + b) * c, (a + b) * c, pairs)
        }
        ZeroL | ZeroR => ConcreteMorphism::identity(0, n),
        Inl => {
            let (a, b) = (dims[0], dims[1]);
            let tgt = sum(a, b);
            unphased(a, a + b, (0..a).map(|x| (x, tgt.inl(x))).collect())
        }
        Inr => {
            let (a, b) = (dims[0], dims[1]);
            let tgt = sum(a, b);
            unphased(b, a + b, (0..b).map(|y| (y, tgt.inr(y))).collect())
        }
        APlusInv | ATimesInv | LPlusInv | RPlusInv | LTimesInv | RTimesInv | DistLInv | DistRInv | ZeroLInv
        | ZeroRInv => {
            let forward = g.inverse().expect("structural generators are invertible");
            compile_gen(&forward, env, cfg)?
                .inverse()
                .expect("forward structural generators compile to bijections")
        }
    };
    Ok(m)
}
