//! Skeletal model of a (braided) unitary fusion category.
//!
//! Hom spaces `Hom(c, w₁w₂…wₙ)` carry the left-parenthesised fusion-tree
//! basis
//!
//! ```text
//! (((w₁ w₂ → a₂; μ₂) w₃ → a₃; μ₃) … wₙ → c; μₙ)
//! ```
//!
//! which is orthonormal when the F-symbols are unitary. F-symbols follow the
//! convention
//!
//! ```text
//! |(ab→e;μ)(ec→d;ν)⟩ = Σ F^{abc}_d[(e,μ,ν),(f,κ,λ)] |(bc→f;κ)(af→d;λ)⟩
//! ```
//!
//! and the braiding acts on a vertex as
//! `ε(a,b)|(ab→c;j)⟩ = Σ_i R^{ab}_c[i,j] |(ba→c;i)⟩`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fusion::{FusionData, Label, UNIT};
use crate::linalg::{zeros, CMatrix, C64, ONE};

/// Left-parenthesised fusion tree of a word. `labels[k]` is the fused
/// charge of the first `k + 1` letters (so `labels[0]` is the first letter
/// and the last entry is the total charge); `mults[k - 1]` is the vertex
/// index where letter `k` joins. The empty word has the single empty tree
/// of charge `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    pub labels: Vec<Label>,
    pub mults: Vec<usize>,
}

impl Tree {
    pub fn root(&self) -> Label {
        self.labels.last().copied().unwrap_or(UNIT)
    }
}

/// Canonical bases of `Hom(c, word)` for every charge `c`.
#[derive(Debug)]
pub struct WordBasis {
    pub trees: Vec<Vec<Tree>>,
    index: Vec<HashMap<Tree, usize>>,
}

impl WordBasis {
    pub fn dim(&self, c: Label) -> usize {
        self.trees[c].len()
    }

    pub fn position(&self, c: Label, t: &Tree) -> usize {
        self.index[c][t]
    }
}

/// One F-move block with explicit bases.
#[derive(Clone, Debug)]
pub struct FBlock {
    /// `(e, μ, ν)` for `(ab→e;μ)(ec→d;ν)`.
    pub left: Vec<(Label, usize, usize)>,
    /// `(f, κ, λ)` for `(bc→f;κ)(af→d;λ)`.
    pub right: Vec<(Label, usize, usize)>,
    pub mat: CMatrix,
}

impl FBlock {
    pub fn left_index(&self, e: Label, mu: usize, nu: usize) -> usize {
        self.left
            .iter()
            .position(|&x| x == (e, mu, nu))
            .expect("left tree not in F block")
    }

    pub fn right_index(&self, f: Label, kappa: usize, lambda: usize) -> usize {
        self.right
            .iter()
            .position(|&x| x == (f, kappa, lambda))
            .expect("right tree not in F block")
    }
}

type Recoupling = HashMap<Tree, Vec<(Tree, usize, C64)>>;

#[derive(Default)]
struct Caches {
    words: Mutex<HashMap<Vec<Label>, Arc<WordBasis>>>,
    recouple: Mutex<HashMap<(Label, Vec<Label>), Arc<Recoupling>>>,
}

pub struct CategoryModel {
    pub name: String,
    pub fusion: FusionData,
    f: HashMap<(Label, Label, Label, Label), FBlock>,
    r: Option<HashMap<(Label, Label, Label), CMatrix>>,
    /// Coefficient of the `(λλ̄→0)` tree in `R̄_λ` (the one in `R_λ` is 1).
    rbar_coeff: Vec<C64>,
    caches: Caches,
}

impl std::fmt::Debug for CategoryModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CategoryModel")
            .field("name", &self.name)
            .field("rank", &self.fusion.rank())
            .field("braided", &self.is_braided())
            .finish()
    }
}

impl Clone for CategoryModel {
    fn clone(&self) -> Self {
        CategoryModel {
            name: self.name.clone(),
            fusion: self.fusion.clone(),
            f: self.f.clone(),
            r: self.r.clone(),
            rbar_coeff: self.rbar_coeff.clone(),
            caches: Caches::default(),
        }
    }
}

/// Enumerates the left and right bases of `F^{abc}_d`.
pub fn f_bases(
    fusion: &FusionData,
    a: Label,
    b: Label,
    c: Label,
    d: Label,
) -> (Vec<(Label, usize, usize)>, Vec<(Label, usize, usize)>) {
    let mut left = Vec::new();
    for e in 0..fusion.rank() {
        for mu in 0..fusion.n(a, b, e) {
            for nu in 0..fusion.n(e, c, d) {
                left.push((e, mu, nu));
            }
        }
    }
    let mut right = Vec::new();
    for f in 0..fusion.rank() {
        for kappa in 0..fusion.n(b, c, f) {
            for lambda in 0..fusion.n(a, f, d) {
                right.push((f, kappa, lambda));
            }
        }
    }
    (left, right)
}

/// F-symbol entries when one of the three inputs is the unit: the identity
/// under the obvious matching of trees.
fn unit_f(a: Label, b: Label, c: Label, left: (Label, usize, usize), right: (Label, usize, usize)) -> C64 {
    let (e, mu, nu) = left;
    let (f, kappa, lambda) = right;
    let hit = if a == UNIT {
        // (0b→b)(bc→d;ν) = (bc→d;ν)(0d→d)
        e == b && kappa == nu && lambda == 0 && mu == 0
    } else if b == UNIT {
        // (a0→a)(ac→d;ν) = (0c→c)(ac→d;ν)
        e == a && f == c && mu == 0 && kappa == 0 && lambda == nu
    } else {
        // (ab→d;μ)(d0→d) = (b0→b)(ab→d;μ)
        f == b && kappa == 0 && nu == 0 && lambda == mu
    };
    if hit {
        ONE
    } else {
        C64::new(0.0, 0.0)
    }
}

impl CategoryModel {
    /// Builds a model from symbol functions. `f_sym(a,b,c,d,left,right)` is
    /// only consulted when none of `a, b, c` is the unit; `r_sym(a,b,c,row,col)`
    /// gives `R^{ab}_c[row, col]`.
    pub fn from_fn<F, R>(name: &str, fusion: FusionData, f_sym: F, r_sym: Option<R>) -> Result<Self>
    where
        F: Fn(Label, Label, Label, Label, (Label, usize, usize), (Label, usize, usize)) -> C64,
        R: Fn(Label, Label, Label, usize, usize) -> C64,
    {
        let n = fusion.rank();
        let mut f = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut ds: Vec<Label> = fusion
                        .channels(a, b)
                        .flat_map(|e| fusion.channels(e, c).collect::<Vec<_>>())
                        .collect();
                    ds.sort_unstable();
                    ds.dedup();
                    for d in ds {
                        let (left, right) = f_bases(&fusion, a, b, c, d);
                        if left.len() != right.len() {
                            return Err(Error::InvalidFusion(format!(
                                "F^{{{a}{b}{c}}}_{d} is not square: fusion rules are not associative"
                            )));
                        }
                        let mut mat = zeros(left.len(), right.len());
                        let trivial = a == UNIT || b == UNIT || c == UNIT;
                        for (i, &l) in left.iter().enumerate() {
                            for (j, &r) in right.iter().enumerate() {
                                mat[(i, j)] = if trivial {
                                    unit_f(a, b, c, l, r)
                                } else {
                                    f_sym(a, b, c, d, l, r)
                                };
                            }
                        }
                        f.insert((a, b, c, d), FBlock { left, right, mat });
                    }
                }
            }
        }
        let r = r_sym.map(|r_sym| {
            let mut r = HashMap::new();
            for a in 0..n {
                for b in 0..n {
                    for c in fusion.channels(a, b) {
                        let rows = fusion.n(b, a, c);
                        let cols = fusion.n(a, b, c);
                        let m = CMatrix::from_fn(rows, cols, |i, j| r_sym(a, b, c, i, j));
                        r.insert((a, b, c), m);
                    }
                }
            }
            r
        });
        let mut model = CategoryModel {
            name: name.to_string(),
            fusion,
            f,
            r,
            rbar_coeff: Vec::new(),
            caches: Caches::default(),
        };
        model.rbar_coeff = vec![ONE; n];
        model.rbar_coeff = (0..n).map(|l| model.solve_rbar(l)).collect::<Result<_>>()?;
        Ok(model)
    }

    /// Normalises `R̄_λ` against `R_λ` so the first conjugate equation holds.
    fn solve_rbar(&self, l: Label) -> Result<C64> {
        let x = self.zigzag_left(l)?;
        if x.norm() < 1e-12 {
            return Err(Error::InvalidInput(format!(
                "F^{{λλ̄λ}}_λ has vanishing (0,0) entry for {}",
                self.fusion.name(l)
            )));
        }
        Ok(ONE / (x * self.fusion.d(l)))
    }

    /// `(1_λ × R_λ*)(R̄_λ × 1_λ)` as a scalar on `λ`.
    pub(crate) fn zigzag_left(&self, l: Label) -> Result<C64> {
        let pair = self.conjugate_pair(l);
        let lam = crate::morphism::SumObject::word(vec![l]);
        let left = self.tensor(&self.identity(&lam), &pair.r.adjoint());
        let right = self.tensor(&pair.rbar, &self.identity(&lam));
        let z = self.compose(&left, &right)?;
        Ok(z.blocks[l][(0, 0)])
    }

    pub fn rank(&self) -> usize {
        self.fusion.rank()
    }

    pub fn is_braided(&self) -> bool {
        self.r.is_some()
    }

    pub fn f_block(&self, a: Label, b: Label, c: Label, d: Label) -> Option<&FBlock> {
        self.f.get(&(a, b, c, d))
    }

    pub fn f_blocks(&self) -> impl Iterator<Item = (&(Label, Label, Label, Label), &FBlock)> {
        self.f.iter()
    }

    pub fn r_block(&self, a: Label, b: Label, c: Label) -> Option<&CMatrix> {
        self.r.as_ref().and_then(|r| r.get(&(a, b, c)))
    }

    pub fn rbar_coeff(&self, l: Label) -> C64 {
        self.rbar_coeff[l]
    }

    /// Replaces one F-matrix entry. Used for corruption tests.
    pub fn set_f_entry(&mut self, key: (Label, Label, Label, Label), i: usize, j: usize, v: C64) {
        if let Some(b) = self.f.get_mut(&key) {
            b.mat[(i, j)] = v;
        }
        self.caches = Caches::default();
    }

    /// Complex-conjugate category: the model of the opposite algebra's
    /// endomorphisms under `T ↦ (T*)ᵒᵖᵖ`. Conjugates F and R.
    pub fn opposite(&self) -> Result<CategoryModel> {
        let r_sym = self
            .r
            .as_ref()
            .map(|_| |a, b, c, i, j| self.r_block(a, b, c).unwrap()[(i, j)].conj());
        let f = |a, b, c, d, l, r| {
            let blk = self.f_block(a, b, c, d).unwrap();
            blk.mat[(blk.left_index_of(l), blk.right_index_of(r))].conj()
        };
        CategoryModel::from_fn(&format!("{}^opp", self.name), self.fusion.clone(), f, r_sym)
    }

    /// Same F-symbols with the braiding taken from `other` (which must have
    /// the same fusion rules). Builds deliberately inconsistent models for
    /// negative controls.
    pub fn with_braiding_of(&self, other: &CategoryModel) -> Result<CategoryModel> {
        let r_sym = other
            .r
            .as_ref()
            .map(|_| |a, b, c, i, j| other.r_block(a, b, c).unwrap()[(i, j)]);
        let f = |a, b, c, d, l, r| {
            let blk = self.f_block(a, b, c, d).unwrap();
            blk.mat[(blk.left_index_of(l), blk.right_index_of(r))]
        };
        CategoryModel::from_fn(&self.name, self.fusion.clone(), f, r_sym)
    }

    /// Deligne product `C₁ ⊠ C₂`. Label `(a₁, a₂)` has index `a₁·n₂ + a₂`;
    /// the vertex index of `(μ₁, μ₂)` is `μ₁·N₂ + μ₂` with `N₂` the
    /// multiplicity of the second factor.
    pub fn deligne(c1: &CategoryModel, c2: &CategoryModel) -> Result<CategoryModel> {
        let n1 = c1.rank();
        let n2 = c2.rank();
        let split = |x: Label| (x / n2, x % n2);
        let f1 = &c1.fusion;
        let f2 = &c2.fusion;
        let names: Vec<String> = (0..n1 * n2)
            .map(|x| {
                let (a, b) = split(x);
                format!("({},{})", f1.name(a), f2.name(b))
            })
            .collect();
        let dual = (0..n1 * n2)
            .map(|x| {
                let (a, b) = split(x);
                f1.dual(a) * n2 + f2.dual(b)
            })
            .collect();
        let mut mult = Vec::with_capacity((n1 * n2).pow(3));
        for a in 0..n1 * n2 {
            for b in 0..n1 * n2 {
                for c in 0..n1 * n2 {
                    let (a1, a2) = split(a);
                    let (b1, b2) = split(b);
                    let (c1_, c2_) = split(c);
                    mult.push((f1.n(a1, b1, c1_) * f2.n(a2, b2, c2_)) as u32);
                }
            }
        }
        let qdim = (0..n1 * n2)
            .map(|x| {
                let (a, b) = split(x);
                f1.d(a) * f2.d(b)
            })
            .collect();
        let fusion = FusionData::from_flat(names, dual, mult, Some(qdim))?;

        let f_sym = |a: Label, b: Label, c: Label, d: Label, l: (Label, usize, usize), r: (Label, usize, usize)| {
            let (a1, a2) = split(a);
            let (b1, b2) = split(b);
            let (cc1, cc2) = split(c);
            let (d1, d2) = split(d);
            let (e1, e2) = split(l.0);
            let (ff1, ff2) = split(r.0);
            let (mu1, mu2) = (l.1 / f2.n(a2, b2, e2), l.1 % f2.n(a2, b2, e2));
            let (nu1, nu2) = (l.2 / f2.n(e2, cc2, d2), l.2 % f2.n(e2, cc2, d2));
            let (k1, k2) = (r.1 / f2.n(b2, cc2, ff2), r.1 % f2.n(b2, cc2, ff2));
            let (la1, la2) = (r.2 / f2.n(a2, ff2, d2), r.2 % f2.n(a2, ff2, d2));
            let b1_ = c1.f_block(a1, b1, cc1, d1).unwrap();
            let b2_ = c2.f_block(a2, b2, cc2, d2).unwrap();
            b1_.mat[(b1_.left_index(e1, mu1, nu1), b1_.right_index(ff1, k1, la1))]
                * b2_.mat[(b2_.left_index(e2, mu2, nu2), b2_.right_index(ff2, k2, la2))]
        };
        let braided = c1.is_braided() && c2.is_braided();
        let r_fn = |a: Label, b: Label, c: Label, i: usize, j: usize| {
            let (a1, a2) = split(a);
            let (b1, b2) = split(b);
            let (cc1, cc2) = split(c);
            let rows2 = f2.n(b2, a2, cc2);
            let cols2 = f2.n(a2, b2, cc2);
            c1.r_block(a1, b1, cc1).unwrap()[(i / rows2, j / cols2)]
                * c2.r_block(a2, b2, cc2).unwrap()[(i % rows2, j % cols2)]
        };
        let r_sym = if braided { Some(r_fn) } else { None };
        CategoryModel::from_fn(&format!("{}⊠{}", c1.name, c2.name), fusion, f_sym, r_sym)
    }

    /// Label of the pair `(a₁, a₂)` in a Deligne product with second factor
    /// of rank `n2`.
    pub fn pair_label(a1: Label, a2: Label, n2: usize) -> Label {
        a1 * n2 + a2
    }

    // ---------------------------------------------------------------------
    // Fusion-tree bases

    pub fn word_basis(&self, word: &[Label]) -> Arc<WordBasis> {
        if let Some(b) = self.caches.words.lock().unwrap().get(word) {
            return b.clone();
        }
        let basis = Arc::new(self.build_word_basis(word));
        self.caches.words.lock().unwrap().insert(word.to_vec(), basis.clone());
        basis
    }

    fn build_word_basis(&self, word: &[Label]) -> WordBasis {
        let n = self.rank();
        let mut trees: Vec<Vec<Tree>> = vec![Vec::new(); n];
        match word.len() {
            0 => trees[UNIT].push(Tree {
                labels: vec![],
                mults: vec![],
            }),
            1 => trees[word[0]].push(Tree {
                labels: vec![word[0]],
                mults: vec![],
            }),
            len => {
                let prefix = self.word_basis(&word[..len - 1]);
                let last = word[len - 1];
                for a in 0..n {
                    for t in &prefix.trees[a] {
                        for c in self.fusion.channels(a, last) {
                            for mu in 0..self.fusion.n(a, last, c) {
                                let mut labels = t.labels.clone();
                                labels.push(c);
                                let mut mults = t.mults.clone();
                                mults.push(mu);
                                trees[c].push(Tree { labels, mults });
                            }
                        }
                    }
                }
            }
        }
        let index = trees
            .iter()
            .map(|ts| ts.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        WordBasis { trees, index }
    }

    /// Expansion of every canonical tree of `[a] ++ y` (with `|y| ≥ 1`) in the
    /// split basis `(tree of y with charge b) ⊗ (ab→c; r)`. Each entry is
    /// `(y-tree, r, coefficient)`.
    pub(crate) fn recoupling(&self, a: Label, y: &[Label]) -> Arc<Recoupling> {
        let key = (a, y.to_vec());
        if let Some(r) = self.caches.recouple.lock().unwrap().get(&key) {
            return r.clone();
        }
        let mut word = vec![a];
        word.extend_from_slice(y);
        let basis = self.word_basis(&word);
        let mut out: Recoupling = HashMap::new();
        for ts in &basis.trees {
            for t in ts {
                out.insert(t.clone(), self.expand_tree(a, y, &t.labels, &t.mults));
            }
        }
        let out = Arc::new(out);
        self.caches.recouple.lock().unwrap().insert(key, out.clone());
        out
    }

    fn expand_tree(&self, a: Label, y: &[Label], labels: &[Label], mults: &[usize]) -> Vec<(Tree, usize, C64)> {
        let m = y.len();
        debug_assert_eq!(labels.len(), m + 1);
        if m == 1 {
            return vec![(
                Tree {
                    labels: vec![y[0]],
                    mults: vec![],
                },
                mults[0],
                ONE,
            )];
        }
        let p = labels[m - 1];
        let c = labels[m];
        let nu = mults[m - 1];
        let ym = y[m - 1];
        let mut acc: HashMap<(Tree, usize), C64> = HashMap::new();
        for (ytree, rho, coeff) in self.expand_tree(a, &y[..m - 1], &labels[..m], &mults[..m - 1]) {
            let q = ytree.root();
            let blk = self.f_block(a, q, ym, c).expect("admissible F block");
            let row = blk.left_index(p, rho, nu);
            for (col, &(f, kappa, lambda)) in blk.right.iter().enumerate() {
                let v = blk.mat[(row, col)];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut t = ytree.clone();
                t.labels.push(f);
                t.mults.push(kappa);
                *acc.entry((t, lambda)).or_insert(C64::new(0.0, 0.0)) += coeff * v;
            }
        }
        let mut v: Vec<_> = acc.into_iter().map(|((t, r), z)| (t, r, z)).collect();
        v.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
        v
    }
}

impl FBlock {
    fn left_index_of(&self, l: (Label, usize, usize)) -> usize {
        self.left_index(l.0, l.1, l.2)
    }

    fn right_index_of(&self, r: (Label, usize, usize)) -> usize {
        self.right_index(r.0, r.1, r.2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::checks::verify_category;

    #[test]
    fn word_bases_count_fusion_paths() {
        // dim Hom(c, τ^n) follows the Fibonacci numbers.
        let fib = catalog::fibonacci().unwrap();
        let mut want = (1usize, 0usize); // (charge τ, charge 1) for n = 1
        for n in 1..8 {
            let b = fib.word_basis(&vec![1; n]);
            assert_eq!((b.dim(1), b.dim(0)), want, "n = {n}");
            want = (want.0 + want.1, want.0);
        }
        let b = fib.word_basis(&[]);
        assert_eq!((b.dim(0), b.dim(1)), (1, 0));
    }

    #[test]
    fn tree_positions_are_consistent() {
        let m = catalog::su2(4).unwrap();
        let b = m.word_basis(&[1, 2, 1, 3]);
        for c in 0..m.rank() {
            for (k, t) in b.trees[c].iter().enumerate() {
                assert_eq!(b.position(c, t), k);
                assert_eq!(t.root(), c);
            }
        }
    }

    #[test]
    fn opposite_conjugates_symbols() {
        let m = catalog::pointed_cyclic(4, 1).unwrap();
        let op = m.opposite().unwrap();
        for (k, blk) in m.f_blocks() {
            let o = op.f_block(k.0, k.1, k.2, k.3).unwrap();
            assert_eq!(o.mat, blk.mat.map(|z| z.conj()));
        }
        assert_eq!(
            *op.r_block(1, 1, 2).unwrap(),
            m.r_block(1, 1, 2).unwrap().map(|z| z.conj())
        );
        assert!(verify_category(&op, 1e-12).unwrap().passes(1e-12));
    }

    #[test]
    fn deligne_product_is_coherent() {
        let fib = catalog::fibonacci().unwrap();
        let ising = catalog::ising().unwrap();
        let p = CategoryModel::deligne(&fib, &ising).unwrap();
        assert_eq!(p.rank(), 6);
        let x = CategoryModel::pair_label(1, 1, 3);
        assert!((p.fusion.d(x) - fib.fusion.d(1) * 2f64.sqrt()).abs() < 1e-12);
        assert!(verify_category(&p, 1e-9).unwrap().passes(1e-9));
    }

    #[test]
    fn non_associative_rules_are_rejected() {
        // a b = a and b b = 1 + b give (ab)b = a but a(bb) = 2a.
        let n = vec![
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 1, 0]],
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 1]],
        ];
        let r = FusionData::new(&["1", "a", "b"], vec![0, 1, 2], n, None).and_then(|fus| {
            CategoryModel::from_fn(
                "bad",
                fus,
                |_, _, _, _, _, _| ONE,
                None::<fn(Label, Label, Label, usize, usize) -> C64>,
            )
        });
        assert!(r.is_err());
    }
}
