//! Intertwiner calculus on top of [`CategoryModel`]: composition, adjoint,
//! monoidal product, conjugates, left/right inverses, braiding and trace.
//!
//! A morphism `X → Y` between formal sums of words is stored, for every
//! simple `c`, as the matrix taking the canonical basis of `Hom(c, X)` to
//! that of `Hom(c, Y)`. Words are flattened, so the public API is strictly
//! monoidal; F-moves happen inside [`CategoryModel::tensor`].

use std::fmt;

use crate::category::CategoryModel;
use crate::error::{Error, Result};
use crate::fusion::{Label, UNIT};
use crate::linalg::{identity, kron, op_norm, zeros, CMatrix, C64, ONE};

/// A finite tensor word of simple objects; the empty word is the unit.
pub type ObjectWord = Vec<Label>;

/// Formal finite direct sum of words. Summands are ordered; their position
/// is the multiplicity tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SumObject {
    pub summands: Vec<ObjectWord>,
}

impl SumObject {
    pub fn word(w: ObjectWord) -> Self {
        SumObject { summands: vec![w] }
    }

    pub fn unit() -> Self {
        SumObject::word(vec![])
    }

    pub fn simple(a: Label) -> Self {
        SumObject::word(vec![a])
    }

    pub fn sum(summands: Vec<ObjectWord>) -> Self {
        SumObject { summands }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Summands `(i, j)` in lexicographic order, each the concatenation.
    pub fn tensor(&self, other: &SumObject) -> SumObject {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for x in &self.summands {
            for y in &other.summands {
                let mut w = x.clone();
                w.extend_from_slice(y);
                out.push(w);
            }
        }
        SumObject { summands: out }
    }
}

impl From<ObjectWord> for SumObject {
    fn from(w: ObjectWord) -> Self {
        SumObject::word(w)
    }
}

#[derive(Clone, PartialEq)]
pub struct Morphism {
    pub source: SumObject,
    pub target: SumObject,
    /// `blocks[c]` is `dim Hom(c, target) × dim Hom(c, source)`.
    pub blocks: Vec<CMatrix>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({:?} -> {:?})", self.source.summands, self.target.summands)?;
        for (c, b) in self.blocks.iter().enumerate() {
            if b.nrows() * b.ncols() > 0 {
                write!(f, "\n  [{c}] {b}")?;
            }
        }
        Ok(())
    }
}

impl Morphism {
    pub fn adjoint(&self) -> Morphism {
        Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Morphism {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|b| b * s).collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ObjectMismatch("sum of morphisms with different objects".into()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Operator norm: largest singular value across blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    /// Euclidean length of the coefficient vector.
    pub fn frobenius(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Number of free coefficients.
    pub fn coeff_len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// Coefficients in a fixed order (blocks by charge, column-major).
    pub fn coefficients(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(|b| b.iter().cloned()).collect()
    }

    pub fn with_coefficients(&self, v: &[C64]) -> Morphism {
        let mut out = self.clone();
        let mut k = 0;
        for b in out.blocks.iter_mut() {
            for z in b.iter_mut() {
                *z = v[k];
                k += 1;
            }
        }
        out
    }

    /// The scalar of an endomorphism of a simple object or of the unit.
    pub fn scalar(&self) -> Option<C64> {
        let nonzero: Vec<&CMatrix> = self.blocks.iter().filter(|b| !b.is_empty()).collect();
        match nonzero.as_slice() {
            [b] if b.nrows() == 1 && b.ncols() == 1 => Some(b[(0, 0)]),
            _ => None,
        }
    }
}

/// `(R_λ, R̄_λ)` with `R ∈ Hom(id, λ̄λ)` and `R̄ ∈ Hom(id, λλ̄)`.
#[derive(Clone, Debug)]
pub struct ConjugatePair {
    pub r: Morphism,
    pub rbar: Morphism,
}

impl CategoryModel {
    pub fn dim(&self, c: Label, obj: &SumObject) -> usize {
        obj.summands.iter().map(|w| self.word_basis(w).dim(c)).sum()
    }

    /// Offsets of each summand's block inside `Hom(c, obj)`.
    pub fn offsets(&self, c: Label, obj: &SumObject) -> Vec<usize> {
        let mut acc = 0;
        obj.summands
            .iter()
            .map(|w| {
                let o = acc;
                acc += self.word_basis(w).dim(c);
                o
            })
            .collect()
    }

    pub fn zero(&self, source: &SumObject, target: &SumObject) -> Morphism {
        let blocks = (0..self.rank())
            .map(|c| zeros(self.dim(c, target), self.dim(c, source)))
            .collect();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        }
    }

    pub fn identity(&self, obj: &SumObject) -> Morphism {
        let blocks = (0..self.rank()).map(|c| identity(self.dim(c, obj))).collect();
        Morphism {
            source: obj.clone(),
            target: obj.clone(),
            blocks,
        }
    }

    /// `f ∘ g`.
    pub fn compose(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if g.target != f.source {
            return Err(Error::ObjectMismatch(format!(
                "compose: {:?} vs {:?}",
                g.target.summands, f.source.summands
            )));
        }
        Ok(Morphism {
            source: g.source.clone(),
            target: f.target.clone(),
            blocks: f.blocks.iter().zip(&g.blocks).map(|(a, b)| a * b).collect(),
        })
    }

    /// Composes a chain `f₁ ∘ f₂ ∘ … ∘ fₙ`.
    pub fn compose_all(&self, fs: &[&Morphism]) -> Result<Morphism> {
        let mut acc = (*fs.last().expect("non-empty chain")).clone();
        for f in fs.iter().rev().skip(1) {
            acc = self.compose(f, &acc)?;
        }
        Ok(acc)
    }

    /// Coordinates of `Hom(c, X ⊗ Y)` in the split basis
    /// `⊕_{a,b} Hom(a,X) ⊗ Hom(b,Y) ⊗ Hom(c,ab)`. Returns the transform
    /// (split × canonical) and the block start of every `(a, b)`.
    fn split_transform(&self, x: &SumObject, y: &SumObject, c: Label) -> (CMatrix, Vec<Option<usize>>) {
        let n = self.rank();
        let fus = &self.fusion;
        let dx: Vec<usize> = (0..n).map(|a| self.dim(a, x)).collect();
        let dy: Vec<usize> = (0..n).map(|b| self.dim(b, y)).collect();
        let mut starts = vec![None; n * n];
        let mut total = 0;
        for a in 0..n {
            for b in 0..n {
                let r = fus.n(a, b, c);
                if r > 0 && dx[a] > 0 && dy[b] > 0 {
                    starts[a * n + b] = Some(total);
                    total += dx[a] * dy[b] * r;
                }
            }
        }
        let xy = x.tensor(y);
        let canon = self.dim(c, &xy);
        let mut tr = zeros(total, canon);
        let xoff: Vec<Vec<usize>> = (0..n).map(|a| self.offsets(a, x)).collect();
        let yoff: Vec<Vec<usize>> = (0..n).map(|b| self.offsets(b, y)).collect();
        let mut col = 0;
        for (i, xw) in x.summands.iter().enumerate() {
            let xb = self.word_basis(xw);
            for (j, yw) in y.summands.iter().enumerate() {
                let yb = self.word_basis(yw);
                let mut w = xw.clone();
                w.extend_from_slice(yw);
                let wb = self.word_basis(&w);
                for t in &wb.trees[c] {
                    let mut place = |a: Label, p: usize, b: Label, q: usize, r: usize, z: C64| {
                        let start = starts[a * n + b].expect("split block");
                        let nr = fus.n(a, b, c);
                        let row = start + p * dy[b] * nr + q * nr + r;
                        tr[(row, col)] += z;
                    };
                    if xw.is_empty() {
                        let q = yoff[c][j] + yb.position(c, t);
                        place(UNIT, xoff[UNIT][i], c, q, 0, ONE);
                    } else if yw.is_empty() {
                        let p = xoff[c][i] + xb.position(c, t);
                        place(c, p, UNIT, yoff[UNIT][j], 0, ONE);
                    } else {
                        let k = xw.len();
                        let xt = crate::category::Tree {
                            labels: t.labels[..k].to_vec(),
                            mults: t.mults[..k - 1].to_vec(),
                        };
                        let a = xt.root();
                        let p = xoff[a][i] + xb.position(a, &xt);
                        // Tree of [a] ++ y.
                        let tail = crate::category::Tree {
                            labels: t.labels[k - 1..].to_vec(),
                            mults: t.mults[k - 1..].to_vec(),
                        };
                        let rec = self.recoupling(a, yw);
                        for (yt, r, z) in rec.get(&tail).expect("tree in recoupling table").iter().cloned() {
                            let b = yt.root();
                            let q = yoff[b][j] + yb.position(b, &yt);
                            place(a, p, b, q, r, z);
                        }
                    }
                    col += 1;
                }
            }
        }
        (tr, starts)
    }

    /// Monoidal product `f × g`.
    pub fn tensor(&self, f: &Morphism, g: &Morphism) -> Morphism {
        let n = self.rank();
        let source = f.source.tensor(&g.source);
        let target = f.target.tensor(&g.target);
        let mut blocks = Vec::with_capacity(n);
        for c in 0..n {
            let (cs, ss) = self.split_transform(&f.source, &g.source, c);
            let (ct, st) = self.split_transform(&f.target, &g.target, c);
            let mut d = zeros(ct.nrows(), cs.nrows());
            for a in 0..n {
                for b in 0..n {
                    let (Some(s0), Some(t0)) = (ss[a * n + b], st[a * n + b]) else {
                        continue;
                    };
                    let r = self.fusion.n(a, b, c);
                    let blk = kron(&kron(&f.blocks[a], &g.blocks[b]), &identity(r));
                    d.view_mut((t0, s0), (blk.nrows(), blk.ncols())).copy_from(&blk);
                }
            }
            blocks.push(ct.adjoint() * d * cs);
        }
        Morphism { source, target, blocks }
    }

    /// `f₁ × f₂ × … × fₙ`.
    pub fn tensor_all(&self, fs: &[&Morphism]) -> Morphism {
        let mut acc = fs[0].clone();
        for f in &fs[1..] {
            acc = self.tensor(&acc, f);
        }
        acc
    }

    /// Orthonormal isometries `T_e ∈ Hom(ν, word)`, one per canonical tree.
    pub fn hom_basis(&self, nu: Label, word: &[Label]) -> Vec<Morphism> {
        let src = SumObject::simple(nu);
        let tgt = SumObject::word(word.to_vec());
        let d = self.dim(nu, &tgt);
        (0..d)
            .map(|k| {
                let mut m = self.zero(&src, &tgt);
                m.blocks[nu][(k, 0)] = ONE;
                m
            })
            .collect()
    }

    /// Canonical injection of summand `i` into `obj`.
    pub fn injection(&self, obj: &SumObject, i: usize) -> Morphism {
        let src = SumObject::word(obj.summands[i].clone());
        let mut m = self.zero(&src, obj);
        for c in 0..self.rank() {
            let off = self.offsets(c, obj)[i];
            for k in 0..self.dim(c, &src) {
                m.blocks[c][(off + k, k)] = ONE;
            }
        }
        m
    }

    /// Re-labels the objects of a morphism whose blocks already match.
    pub fn retype(&self, f: &Morphism, source: SumObject, target: SumObject) -> Result<Morphism> {
        for c in 0..self.rank() {
            if self.dim(c, &source) != f.blocks[c].ncols() || self.dim(c, &target) != f.blocks[c].nrows() {
                return Err(Error::ObjectMismatch("retype changes block shapes".into()));
            }
        }
        Ok(Morphism {
            source,
            target,
            blocks: f.blocks.clone(),
        })
    }

    pub fn conjugate_pair(&self, l: Label) -> ConjugatePair {
        let lb = self.fusion.dual(l);
        let mut r = self.zero(&SumObject::unit(), &SumObject::word(vec![lb, l]));
        r.blocks[UNIT][(0, 0)] = ONE;
        let mut rbar = self.zero(&SumObject::unit(), &SumObject::word(vec![l, lb]));
        rbar.blocks[UNIT][(0, 0)] = self.rbar_coeff(l);
        ConjugatePair { r, rbar }
    }

    /// Residuals of both conjugate equations for `λ`.
    pub fn conjugate_residuals(&self, l: Label) -> Result<(f64, f64)> {
        let lb = self.fusion.dual(l);
        let p = self.conjugate_pair(l);
        let lam = SumObject::simple(l);
        let lamb = SumObject::simple(lb);
        let d = self.fusion.d(l);
        let e1 = self.compose(
            &self.tensor(&self.identity(&lam), &p.r.adjoint()),
            &self.tensor(&p.rbar, &self.identity(&lam)),
        )?;
        let e2 = self.compose(
            &self.tensor(&self.identity(&lamb), &p.rbar.adjoint()),
            &self.tensor(&p.r, &self.identity(&lamb)),
        )?;
        let id1 = self.identity(&lam).scale(C64::new(1.0 / d, 0.0));
        let id2 = self.identity(&lamb).scale(C64::new(1.0 / d, 0.0));
        Ok((e1.sub(&id1)?.norm(), e2.sub(&id2)?.norm()))
    }

    /// Drops the leading letter `l` from every summand.
    fn strip_left(&self, obj: &SumObject, l: Label) -> Result<SumObject> {
        obj.summands
            .iter()
            .map(|w| match w.first() {
                Some(&x) if x == l => Ok(w[1..].to_vec()),
                _ => Err(Error::ObjectMismatch(format!("{:?} does not start with {l}", w))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SumObject::sum)
    }

    fn strip_right(&self, obj: &SumObject, l: Label) -> Result<SumObject> {
        obj.summands
            .iter()
            .map(|w| match w.last() {
                Some(&x) if x == l => Ok(w[..w.len() - 1].to_vec()),
                _ => Err(Error::ObjectMismatch(format!("{:?} does not end with {l}", w))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SumObject::sum)
    }

    /// Standard left inverse `Φ_ρ(X) = R_ρ*(1_ρ̄ × X)(R_ρ × 1_A)` for a word
    /// `ρ`, peeling the leftmost letter first.
    pub fn left_inverse(&self, rho: &[Label], x: &Morphism) -> Result<Morphism> {
        let mut cur = x.clone();
        for &l in rho {
            let a = self.strip_left(&cur.source, l)?;
            let b = self.strip_left(&cur.target, l)?;
            let p = self.conjugate_pair(l);
            let lb = SumObject::simple(self.fusion.dual(l));
            let lift = self.tensor(&p.r, &self.identity(&a));
            let mid = self.tensor(&self.identity(&lb), &cur);
            let cap = self.tensor(&p.r.adjoint(), &self.identity(&b));
            let lift = self.retype(
                &lift,
                a.clone(),
                SumObject::simple(self.fusion.dual(l)).tensor(&cur.source),
            )?;
            let cap = self.retype(
                &cap,
                SumObject::simple(self.fusion.dual(l)).tensor(&cur.target),
                b.clone(),
            )?;
            cur = self.compose(&cap, &self.compose(&mid, &lift)?)?;
        }
        Ok(cur)
    }

    /// Standard right inverse `Ψ_ρ(X) = (1_B × R̄_ρ*)(X × 1_ρ̄)(1_A × R̄_ρ)`,
    /// peeling the rightmost letter first.
    pub fn right_inverse(&self, rho: &[Label], x: &Morphism) -> Result<Morphism> {
        let mut cur = x.clone();
        for &l in rho.iter().rev() {
            let a = self.strip_right(&cur.source, l)?;
            let b = self.strip_right(&cur.target, l)?;
            let p = self.conjugate_pair(l);
            let lb = SumObject::simple(self.fusion.dual(l));
            let lift = self.tensor(&self.identity(&a), &p.rbar);
            let mid = self.tensor(&cur, &self.identity(&lb));
            let cap = self.tensor(&self.identity(&b), &p.rbar.adjoint());
            let lift = self.retype(&lift, a.clone(), cur.source.tensor(&lb))?;
            let cap = self.retype(&cap, cur.target.tensor(&lb), b.clone())?;
            cur = self.compose(&cap, &self.compose(&mid, &lift)?)?;
        }
        Ok(cur)
    }

    /// `Tr(f) = Σ_c d(c) tr f_c`.
    pub fn trace(&self, f: &Morphism) -> Result<C64> {
        if f.source != f.target {
            return Err(Error::ObjectMismatch("trace of a non-endomorphism".into()));
        }
        Ok(f.blocks
            .iter()
            .enumerate()
            .map(|(c, b)| b.trace() * self.fusion.d(c))
            .sum())
    }

    /// Quantum dimension of an object.
    pub fn object_dim(&self, obj: &SumObject) -> f64 {
        (0..self.rank())
            .map(|c| self.dim(c, obj) as f64 * self.fusion.d(c))
            .sum()
    }

    // ---------------------------------------------------------------------
    // Braiding

    pub fn braiding(&self, a: Label, b: Label) -> Result<Morphism> {
        if !self.is_braided() {
            return Err(Error::Unsupported(format!("{} carries no braiding", self.name)));
        }
        let mut m = self.zero(&SumObject::word(vec![a, b]), &SumObject::word(vec![b, a]));
        for c in self.fusion.channels(a, b) {
            m.blocks[c] = self.r_block(a, b, c).unwrap().clone();
        }
        Ok(m)
    }

    /// Crossing of letters `pos` and `pos + 1` inside `word`.
    fn elementary_crossing(&self, word: &[Label], pos: usize) -> Result<Morphism> {
        let left = SumObject::word(word[..pos].to_vec());
        let right = SumObject::word(word[pos + 2..].to_vec());
        let e = self.braiding(word[pos], word[pos + 1])?;
        Ok(self.tensor_all(&[&self.identity(&left), &e, &self.identity(&right)]))
    }

    /// `ε(X, Y) ∈ Hom(XY, YX)` for words, built from crossings of adjacent
    /// letters (each letter of `Y` passes over the whole of `X`).
    pub fn braid_word(&self, x: &[Label], y: &[Label]) -> Result<Morphism> {
        self.braid_word_impl(x, y)
    }

    /// `ε(Y, X)* ∈ Hom(XY, YX)`, the inverse crossing.
    pub fn braid_word_inverse(&self, x: &[Label], y: &[Label]) -> Result<Morphism> {
        Ok(self.braid_word_impl(y, x)?.adjoint())
    }

    fn braid_word_impl(&self, x: &[Label], y: &[Label]) -> Result<Morphism> {
        if !self.is_braided() {
            return Err(Error::Unsupported(format!("{} carries no braiding", self.name)));
        }
        let mut word: Vec<Label> = x.iter().chain(y).copied().collect();
        let mut acc = self.identity(&SumObject::word(word.clone()));
        let n = x.len();
        for j in 0..y.len() {
            for pos in (j..j + n).rev() {
                let step = self.elementary_crossing(&word, pos)?;
                word.swap(pos, pos + 1);
                acc = self.compose(&step, &acc)?;
            }
        }
        Ok(acc)
    }

    /// Braiding between sums, summand by summand: `X_i Y_j → Y_j X_i`.
    /// With `inverse`, uses `ε(Y_j, X_i)*` instead.
    pub fn braid_sum(&self, x: &SumObject, y: &SumObject, inverse: bool) -> Result<Morphism> {
        let source = x.tensor(y);
        let target = y.tensor(x);
        let mut parts = Vec::new();
        for (i, xw) in x.summands.iter().enumerate() {
            for (j, yw) in y.summands.iter().enumerate() {
                let m = if inverse {
                    self.braid_word_inverse(xw, yw)?
                } else {
                    self.braid_word(xw, yw)?
                };
                parts.push((i * y.len() + j, j * x.len() + i, m));
            }
        }
        self.assemble(&source, &target, &parts)
    }

    /// Places word-to-word morphisms between summands `(src, tgt)` of two sums.
    pub fn assemble(
        &self,
        source: &SumObject,
        target: &SumObject,
        parts: &[(usize, usize, Morphism)],
    ) -> Result<Morphism> {
        let mut out = self.zero(source, target);
        for c in 0..self.rank() {
            let so = self.offsets(c, source);
            let to = self.offsets(c, target);
            for (s, t, m) in parts {
                if m.source.summands != [source.summands[*s].clone()]
                    || m.target.summands != [target.summands[*t].clone()]
                {
                    return Err(Error::ObjectMismatch("assemble: summand mismatch".into()));
                }
                let b = &m.blocks[c];
                if b.is_empty() {
                    continue;
                }
                let mut view = out.blocks[c].view_mut((to[*t], so[*s]), (b.nrows(), b.ncols()));
                view += b;
            }
        }
        Ok(out)
    }
}
