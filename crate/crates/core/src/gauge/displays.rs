//! Closed-form coordinate expressions for Yang-Mills theory, written index
//! by index so that they can be compared with the generic operators.
//!
//! All index sums run over ordered tuples. Brackets are expanded with the
//! `½` convention: `η^{ρ(σ}η^{ξ)ν} = ½(η^{ρσ}η^{ξν} + η^{ρξ}η^{σν})`.

use crate::error::Result;
use crate::expr::{rat, Expr, MultiIndex};
use crate::geometry::Form;

use super::{JacobiSlot, YangMills};

fn range(k: usize) -> std::ops::Range<usize> {
    0..k
}

impl YangMills {
    /// `E^ν_B = δ_{BA}η^{λμ}η^{σν}(ω^A_{σ,λμ} - ω^A_{λ,σμ} + c^A_{CD}ω^C_{λ,μ}ω^D_σ
    /// + c^A_{CD}ω^C_λω^D_{σ,μ}) + η^{λμ}η^{σν}δ_{DA}(ω^D_{σ,λ} - ω^D_{λ,σ}
    /// + c^D_{EF}ω^E_λω^F_σ)c^A_{BC}ω^C_μ`.
    pub fn euler_lagrange_display(&self) -> Vec<Expr> {
        let (n, d) = (self.n(), self.dim());
        let mut out = vec![Expr::zero(); self.bundle().m()];
        for b in range(d) {
            for nu in range(n) {
                let mut e = Expr::zero();
                for lam in range(n) {
                    for mu in range(n) {
                        for sig in range(n) {
                            let g = &self.eta(lam, mu) * &self.eta(sig, nu);
                            if g.is_zero() {
                                continue;
                            }
                            for a in range(d) {
                                let da = &self.delta(b, a) * &g;
                                if !da.is_zero() {
                                    let mut inner = &self.w(a, sig, &[lam, mu]) - &self.w(a, lam, &[sig, mu]);
                                    for c in range(d) {
                                        for dd in range(d) {
                                            let k = self.c(a, c, dd);
                                            if k.is_zero() {
                                                continue;
                                            }
                                            inner += &k * &(&self.w(c, lam, &[mu]) * &self.w(dd, sig, &[]));
                                            inner += &k * &(&self.w(c, lam, &[]) * &self.w(dd, sig, &[mu]));
                                        }
                                    }
                                    e += &da * &inner;
                                }
                                for dd in range(d) {
                                    let dda = &self.delta(dd, a) * &g;
                                    if dda.is_zero() {
                                        continue;
                                    }
                                    let mut f = &self.w(dd, sig, &[lam]) - &self.w(dd, lam, &[sig]);
                                    for ee in range(d) {
                                        for ff in range(d) {
                                            let k = self.c(dd, ee, ff);
                                            if !k.is_zero() {
                                                f += &k * &(&self.w(ee, lam, &[]) * &self.w(ff, sig, &[]));
                                            }
                                        }
                                    }
                                    for c in range(d) {
                                        let k = self.c(a, b, c);
                                        if !k.is_zero() {
                                            e += &(&dda * &f) * &(&k * &self.w(c, mu, &[]));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                out[self.fibre(b, nu)] = e;
            }
        }
        out
    }

    /// Abelian equations `E^ν_A = η^{αμ}η^{βν}(ω^A_{β,αμ} - ω^A_{α,βμ})`.
    pub fn maxwell_display(&self) -> Vec<Expr> {
        let n = self.n();
        let mut out = vec![Expr::zero(); self.bundle().m()];
        for a in range(self.dim()) {
            for nu in range(n) {
                let mut e = Expr::zero();
                for al in range(n) {
                    for mu in range(n) {
                        for be in range(n) {
                            let g = &self.eta(al, mu) * &self.eta(be, nu);
                            if !g.is_zero() {
                                e += &g * &(&self.w(a, be, &[al, mu]) - &self.w(a, al, &[be, mu]));
                            }
                        }
                    }
                }
                out[self.fibre(a, nu)] = e;
            }
        }
        out
    }

    /// Abelian Jacobi equations `η^{σν}η^{τκ}d_κ(d_τΞ^A_σ - d_σΞ^A_τ)`.
    pub fn jacobi_maxwell_display(&self) -> Vec<Expr> {
        let n = self.n();
        let x = JacobiSlot::Xi;
        let mut out = vec![Expr::zero(); self.bundle().m()];
        for a in range(self.dim()) {
            for nu in range(n) {
                let mut e = Expr::zero();
                for sig in range(n) {
                    for tau in range(n) {
                        for kap in range(n) {
                            let g = &self.eta(sig, nu) * &self.eta(tau, kap);
                            if !g.is_zero() {
                                e += &g * &(&self.xi(x, a, sig, &[tau, kap]) - &self.xi(x, a, tau, &[sig, kap]));
                            }
                        }
                    }
                }
                out[self.fibre(a, nu)] = e;
            }
        }
        out
    }

    /// The three contributions `Ξ^Z_α ∂E^ν_B/∂ω^Z_α`,
    /// `d_βΞ^Z_α ∂E^ν_B/∂ω^Z_{α,β}` and `d_γd_βΞ^Z_α ∂E^ν_B/∂ω^Z_{α,βγ}` to the
    /// Jacobi equation, each in closed form.
    pub fn jacobi_term_displays(&self) -> [Vec<Expr>; 3] {
        let (n, d) = (self.n(), self.dim());
        let x = JacobiSlot::Xi;
        let m = self.bundle().m();
        let mut t = [vec![Expr::zero(); m], vec![Expr::zero(); m], vec![Expr::zero(); m]];
        for b in range(d) {
            for nu in range(n) {
                let (mut t0, mut t1, mut t2) = (Expr::zero(), Expr::zero(), Expr::zero());
                for z in range(d) {
                    for al in range(n) {
                        let mut br = Expr::zero();
                        for a in range(d) {
                            let dba = self.delta(b, a);
                            for c in range(d) {
                                for lam in range(n) {
                                    for mu in range(n) {
                                        let g = &self.eta(lam, mu) * &self.eta(al, nu);
                                        br += &(&(&dba * &self.c(a, c, z)) * &g) * &self.w(c, lam, &[mu]);
                                    }
                                }
                            }
                            for dd in range(d) {
                                for sig in range(n) {
                                    for mu in range(n) {
                                        let g = &self.eta(al, mu) * &self.eta(sig, nu);
                                        br += &(&(&dba * &self.c(a, z, dd)) * &g) * &self.w(dd, sig, &[mu]);
                                    }
                                }
                            }
                        }
                        for dd in range(d) {
                            for a in range(d) {
                                let dda = self.delta(dd, a);
                                if dda.is_zero() {
                                    continue;
                                }
                                for c in range(d) {
                                    let cabc = &self.c(a, b, c) * &dda;
                                    if cabc.is_zero() {
                                        continue;
                                    }
                                    for mu in range(n) {
                                        let wc = &cabc * &self.w(c, mu, &[]);
                                        for sig in range(n) {
                                            for f in range(d) {
                                                let g = &self.eta(al, mu) * &self.eta(sig, nu);
                                                let k = &g * &self.c(dd, z, f);
                                                br += &(&k * &self.w(f, sig, &[])) * &wc;
                                            }
                                        }
                                        for lam in range(n) {
                                            for e in range(d) {
                                                let g = &self.eta(lam, mu) * &self.eta(al, nu);
                                                let k = &g * &self.c(dd, e, z);
                                                br += &(&k * &self.w(e, lam, &[])) * &wc;
                                            }
                                        }
                                    }
                                }
                                let k = &self.c(a, b, z) * &dda;
                                if k.is_zero() {
                                    continue;
                                }
                                for lam in range(n) {
                                    for sig in range(n) {
                                        let g = &self.eta(lam, al) * &self.eta(sig, nu);
                                        if !g.is_zero() {
                                            br += &(&g * &k) * &self.field_strength(dd, lam, sig);
                                        }
                                    }
                                }
                            }
                        }
                        t0 += &self.xi(x, z, al, &[]) * &br;

                        for be in range(n) {
                            let mut br = Expr::zero();
                            for a in range(d) {
                                let dba = self.delta(b, a);
                                if !dba.is_zero() {
                                    for sig in range(n) {
                                        for dd in range(d) {
                                            let g = &self.eta(al, be) * &self.eta(sig, nu);
                                            br += &(&(&dba * &g) * &self.c(a, z, dd)) * &self.w(dd, sig, &[]);
                                        }
                                    }
                                    for lam in range(n) {
                                        for c in range(d) {
                                            let g = &self.eta(lam, be) * &self.eta(al, nu);
                                            br += &(&(&dba * &g) * &self.c(a, c, z)) * &self.w(c, lam, &[]);
                                        }
                                    }
                                }
                                let dza = self.delta(z, a);
                                if dza.is_zero() {
                                    continue;
                                }
                                for c in range(d) {
                                    for mu in range(n) {
                                        let g = &(&self.eta(be, mu) * &self.eta(al, nu))
                                            - &(&self.eta(al, mu) * &self.eta(be, nu));
                                        br += &(&(&dza * &g) * &self.c(a, b, c)) * &self.w(c, mu, &[]);
                                    }
                                }
                            }
                            t1 += &self.xi(x, z, al, &[be]) * &br;
                        }
                    }
                    let dbz = self.delta(b, z);
                    if dbz.is_zero() {
                        continue;
                    }
                    for sig in range(n) {
                        for kap in range(n) {
                            for tau in range(n) {
                                let g = &(&self.eta(sig, nu) * &self.eta(kap, tau)) * &dbz;
                                if !g.is_zero() {
                                    t2 += &g
                                        * &(&self.xi(x, z, sig, &[tau, kap]) - &self.xi(x, z, tau, &[sig, kap]));
                                }
                            }
                        }
                    }
                }
                let s = self.fibre(b, nu);
                t[0][s] = t0;
                t[1][s] = t1;
                t[2][s] = t2;
            }
        }
        t
    }

    /// `d_αΞ^A_σ + c^A_{CZ}Ξ^Z_σω^C_α`.
    fn nabla_upper(&self, slot: JacobiSlot, a: usize, sig: usize, al: usize) -> Expr {
        let mut e = self.xi(slot, a, sig, &[al]);
        for c in range(self.dim()) {
            for z in range(self.dim()) {
                let k = self.c(a, c, z);
                if !k.is_zero() {
                    e += &k * &(&self.xi(slot, z, sig, &[]) * &self.w(c, al, &[]));
                }
            }
        }
        e
    }

    /// `∇_β K_B = d_β K_B + K_A c^A_{BC} ω^C_β` for a family `K_A` carrying
    /// a lower algebra index.
    fn nabla_lower(&self, k: &[Expr], b: usize, be: usize) -> Result<Expr> {
        let mut e = self.bundle().total_derivative(&k[b], be)?;
        for a in range(self.dim()) {
            for c in range(self.dim()) {
                let s = self.c(a, b, c);
                if !s.is_zero() {
                    e += &(&k[a] * &s) * &self.w(c, be, &[]);
                }
            }
        }
        Ok(e)
    }

    /// The summed Jacobi equation written with explicit total derivatives.
    pub fn jacobi_summed_display(&self) -> Result<Vec<Expr>> {
        let (n, d) = (self.n(), self.dim());
        let x = JacobiSlot::Xi;
        let mut out = vec![Expr::zero(); self.bundle().m()];
        for b in range(d) {
            for nu in range(n) {
                let mut e = Expr::zero();
                for sig in range(n) {
                    for al in range(n) {
                        for be in range(n) {
                            let g = &self.eta(sig, nu) * &self.eta(al, be);
                            if g.is_zero() {
                                continue;
                            }
                            let mut braces = Expr::zero();
                            for a in range(d) {
                                let dba = self.delta(b, a);
                                if dba.is_zero() {
                                    continue;
                                }
                                let mut p = self.xi(x, a, sig, &[al]);
                                let mut q = self.xi(x, a, al, &[sig]);
                                for c in range(d) {
                                    for z in range(d) {
                                        let k = self.c(a, c, z);
                                        p += &k * &(&self.xi(x, z, sig, &[]) * &self.w(c, al, &[]));
                                        q += &k * &(&self.xi(x, z, al, &[]) * &self.w(c, sig, &[]));
                                    }
                                }
                                let p = self.bundle().total_derivative(&(&p * &dba), be)?;
                                let q = self.bundle().total_derivative(&(&q * &dba), be)?;
                                braces += &p - &q;
                            }
                            for a in range(d) {
                                for dd in range(d) {
                                    let dad = self.delta(a, dd);
                                    if dad.is_zero() {
                                        continue;
                                    }
                                    let mut p = self.xi(x, dd, sig, &[al]);
                                    let mut q = self.xi(x, dd, al, &[sig]);
                                    for z in range(d) {
                                        for ee in range(d) {
                                            let k = self.c(dd, ee, z);
                                            p += &(&self.xi(x, z, sig, &[]) * &k) * &self.w(ee, al, &[]);
                                            q += &(&self.xi(x, z, al, &[]) * &k) * &self.w(ee, sig, &[]);
                                        }
                                    }
                                    for c in range(d) {
                                        let k = self.c(a, b, c);
                                        if !k.is_zero() {
                                            braces += &(&(&(&p - &q) * &dad) * &k) * &self.w(c, be, &[]);
                                        }
                                    }
                                }
                            }
                            braces += self.curvature_term(b, be, sig, al);
                            e += &g * &braces;
                        }
                    }
                }
                out[self.fibre(b, nu)] = e;
            }
        }
        Ok(out)
    }

    /// `F^D_{βσ} c^A_{BZ} Ξ^Z_α δ_{AD}`.
    fn curvature_term(&self, b: usize, be: usize, sig: usize, al: usize) -> Expr {
        let d = self.dim();
        let mut e = Expr::zero();
        for dd in range(d) {
            for a in range(d) {
                let dad = self.delta(a, dd);
                if dad.is_zero() {
                    continue;
                }
                for z in range(d) {
                    let k = &self.c(a, b, z) * &dad;
                    if !k.is_zero() {
                        e += &(&self.field_strength(dd, be, sig) * &k) * &self.xi(JacobiSlot::Xi, z, al, &[]);
                    }
                }
            }
        }
        e
    }

    /// Covariant Jacobi equation
    /// `η^{νσ}η^{βα}{∇_β[(∇_αΞ^A_σ - ∇_σΞ^A_α)δ_{BA}] + F^D_{βσ}c^A_{BZ}Ξ^Z_αδ_{AD}}`.
    ///
    /// The inner `∇` acts on the upper index of `Ξ`; the outer one acts on the
    /// lowered index `B` after contraction with `δ`.
    pub fn jacobi_covariant_display(&self) -> Result<Vec<Expr>> {
        let (n, d) = (self.n(), self.dim());
        let x = JacobiSlot::Xi;
        let mut out = vec![Expr::zero(); self.bundle().m()];
        for b in range(d) {
            for nu in range(n) {
                let mut e = Expr::zero();
                for sig in range(n) {
                    for al in range(n) {
                        for be in range(n) {
                            let g = &self.eta(nu, sig) * &self.eta(be, al);
                            if g.is_zero() {
                                continue;
                            }
                            let k: Vec<Expr> = range(d)
                                .map(|bb| {
                                    range(d)
                                        .map(|a| {
                                            &(&self.nabla_upper(x, a, sig, al) - &self.nabla_upper(x, a, al, sig))
                                                * &self.delta(bb, a)
                                        })
                                        .sum()
                                })
                                .collect();
                            let mut braces = self.nabla_lower(&k, b, be)?;
                            braces += self.curvature_term(b, be, sig, al);
                            e += &g * &braces;
                        }
                    }
                }
                out[self.fibre(b, nu)] = e;
            }
        }
        Ok(out)
    }

    /// `∂E^ν_B/∂ω^Z_{ρ,ξ} = δ_{BA}c^A_{ZD}ω^D_σ(η^{ρξ}η^{σν} - η^{σξ}η^{ρν})
    /// + δ_{ZA}c^A_{BC}ω^C_σ(η^{ρν}η^{σξ} - η^{ρσ}η^{ξν})`.
    pub fn de_first_display(&self, b: usize, nu: usize, z: usize, rho: usize, xi: usize) -> Expr {
        let (n, d) = (self.n(), self.dim());
        let mut e = Expr::zero();
        for sig in range(n) {
            let g1 = &(&self.eta(rho, xi) * &self.eta(sig, nu)) - &(&self.eta(sig, xi) * &self.eta(rho, nu));
            let g2 = &(&self.eta(rho, nu) * &self.eta(sig, xi)) - &(&self.eta(rho, sig) * &self.eta(xi, nu));
            for a in range(d) {
                for c in range(d) {
                    let t1 = &(&self.delta(b, a) * &self.c(a, z, c)) * &g1;
                    let t2 = &(&self.delta(z, a) * &self.c(a, b, c)) * &g2;
                    let k = &t1 + &t2;
                    if !k.is_zero() {
                        e += &k * &self.w(c, sig, &[]);
                    }
                }
            }
        }
        e
    }

    /// `∂E^ν_B/∂ω^Z_{ρ,ξτ} = δ_{BZ}(η^{ξτ}η^{ρν} - η^{ρ(τ}η^{ξ)ν})`, symmetric in
    /// `ξτ`.
    pub fn de_second_display(&self, b: usize, nu: usize, z: usize, rho: usize, xi: usize, tau: usize) -> Expr {
        let sym = (&(&self.eta(rho, tau) * &self.eta(xi, nu)) + &(&self.eta(rho, xi) * &self.eta(tau, nu)))
            .scale(&rat(1, 2));
        &self.delta(b, z) * &(&(&self.eta(xi, tau) * &self.eta(rho, nu)) - &sym)
    }

    /// `P1^{ξ}_{Zρ} = Ξ^B_ν ∂E^ν_B/∂ω^Z_{ρ,ξ}` and
    /// `P2^{ξτ}_{Zρ} = Ξ^B_ν ∂E^ν_B/∂ω^Z_{ρ,ξτ}`.
    fn contracted_partials(&self, slot: JacobiSlot, z: usize, rho: usize, xi: usize) -> (Expr, Vec<Expr>) {
        let (n, d) = (self.n(), self.dim());
        let mut p1 = Expr::zero();
        let mut p2 = vec![Expr::zero(); n];
        for b in range(d) {
            for nu in range(n) {
                let f = self.xi(slot, b, nu, &[]);
                p1 += &f * &self.de_first_display(b, nu, z, rho, xi);
                for (tau, p) in p2.iter_mut().enumerate() {
                    *p += &f * &self.de_second_display(b, nu, z, rho, xi, tau);
                }
            }
        }
        (p1, p2)
    }

    /// `R(d(Ξ⌋E_n(λ_YM))) = -(P1 - d_τ P2^τ) θ^Z_ρ ∧ ds_ξ - P2^τ θ^Z_{ρ,τ} ∧ ds_ξ`.
    pub fn residual_display(&self) -> Result<Form> {
        let (n, d) = (self.n(), self.dim());
        let bundle = self.bundle();
        let mut out = Form::zero();
        for z in range(d) {
            for rho in range(n) {
                for xi in range(n) {
                    let (p1, p2) = self.contracted_partials(JacobiSlot::Xi, z, rho, xi);
                    let ds = Form::volume_i(bundle, xi);
                    let s = self.fibre(z, rho);
                    let mut c0 = p1;
                    for (tau, p) in p2.iter().enumerate() {
                        c0 -= bundle.total_derivative(p, tau)?;
                        out -= &Form::omega(s, MultiIndex::single(tau)).wedge(&ds).scale(p);
                    }
                    out -= &Form::omega(s, MultiIndex::empty()).wedge(&ds).scale(&c0);
                }
            }
        }
        Ok(out)
    }

    /// Current components before the covariant rewrite:
    /// `P1 Ξ̃^Z_ρ - d_τ(P2^τ) Ξ̃^Z_ρ + P2^τ d_τ Ξ̃^Z_ρ`.
    pub fn current_expanded_display(&self) -> Result<Vec<Expr>> {
        let (n, d) = (self.n(), self.dim());
        let t = JacobiSlot::Tilde;
        let mut out = vec![Expr::zero(); n];
        for (xi, slot) in out.iter_mut().enumerate() {
            for z in range(d) {
                for rho in range(n) {
                    let (p1, p2) = self.contracted_partials(JacobiSlot::Xi, z, rho, xi);
                    let xt = self.xi(t, z, rho, &[]);
                    *slot += &p1 * &xt;
                    for (tau, p) in p2.iter().enumerate() {
                        *slot -= &self.bundle().total_derivative(p, tau)? * &xt;
                        *slot += p * &self.xi(t, z, rho, &[tau]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The closed form of the two-Jacobi-field current:
    /// `η^{ρ[ξ}η^{σ]ν}δ_{BA}c^A_{ZD}ω^D_σ(Ξ^B_νΞ̃^Z_ρ - Ξ^Z_ρΞ̃^B_ν)
    /// + (η^{ξσ}η^{ρν} - η^{ρ(σ}η^{ξ)ν})(Ξ^B_ν∇_σ(Ξ̃^Z_ρδ_{ZB}) - Ξ̃^Z_ρ∇_σ(Ξ^B_νδ_{BZ}))`.
    pub fn current_display(&self, a: JacobiSlot, b: JacobiSlot) -> Result<Vec<Expr>> {
        let (n, d) = (self.n(), self.dim());
        let half = rat(1, 2);
        let mut out = vec![Expr::zero(); n];
        for (xi, slot) in out.iter_mut().enumerate() {
            for rho in range(n) {
                for sig in range(n) {
                    for nu in range(n) {
                        let anti = (&(&self.eta(rho, xi) * &self.eta(sig, nu))
                            - &(&self.eta(rho, sig) * &self.eta(xi, nu)))
                            .scale(&half);
                        let sym = (&(&self.eta(rho, sig) * &self.eta(xi, nu))
                            + &(&self.eta(rho, xi) * &self.eta(sig, nu)))
                            .scale(&half);
                        let g = &(&self.eta(xi, sig) * &self.eta(rho, nu)) - &sym;
                        if !anti.is_zero() {
                            for bb in range(d) {
                                for aa in range(d) {
                                    let dba = self.delta(bb, aa);
                                    if dba.is_zero() {
                                        continue;
                                    }
                                    for z in range(d) {
                                        let pair = &(&self.xi(a, bb, nu, &[]) * &self.xi(b, z, rho, &[]))
                                            - &(&self.xi(a, z, rho, &[]) * &self.xi(b, bb, nu, &[]));
                                        for dd in range(d) {
                                            let k = &(&anti * &dba) * &self.c(aa, z, dd);
                                            if !k.is_zero() {
                                                *slot += &(&k * &self.w(dd, sig, &[])) * &pair;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                        if g.is_zero() {
                            continue;
                        }
                        let lower = |slot: JacobiSlot, mu: usize| -> Vec<Expr> {
                            range(d)
                                .map(|bb| range(d).map(|z| &self.xi(slot, z, mu, &[]) * &self.delta(z, bb)).sum())
                                .collect()
                        };
                        let kt = lower(b, rho);
                        let kx = lower(a, nu);
                        let mut inner = Expr::zero();
                        for bb in range(d) {
                            inner += &self.xi(a, bb, nu, &[]) * &self.nabla_lower(&kt, bb, sig)?;
                        }
                        for z in range(d) {
                            inner -= &self.xi(b, z, rho, &[]) * &self.nabla_lower(&kx, z, sig)?;
                        }
                        *slot += &g * &inner;
                    }
                }
            }
        }
        Ok(out)
    }
}
