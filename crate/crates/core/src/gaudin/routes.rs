use itertools::Itertools;
use num_traits::One;

use super::derivative::DerivativeTable;
use super::{GaudinInstance, OperatorPolynomial};
use crate::combinatorics::{alpha_element, Partition};
use crate::error::{domain, Error, Result};
use crate::par::{self, Execution};
use crate::poly::Poly;
use crate::scalar::{binomial_q, factorial_q, int, Rational};
use crate::symfunc::power_sum_expansion;
use crate::tensor::TensorOperator;

type Op = TensorOperator<Rational>;
type OpPoly = OperatorPolynomial<Rational>;

fn subset_labels(mask: u32, labels: &[usize]) -> Vec<usize> {
    labels.iter().enumerate().filter(|(p, _)| mask & (1 << p) != 0).map(|(_, &l)| l).collect()
}

/// `T_λ(u) = Σ_{K⊆[n]} Π_{l∉K}(u+z_l) · d_K s_λ(h)`, with `d_K` extracted from
/// the power-sum expansion of `s_λ`.
pub fn build_t_definitional(lambda: &Partition, inst: &GaudinInstance, exec: Execution) -> Result<OpPoly> {
    inst.validate()?;
    let labels = inst.labels();
    let table = DerivativeTable::new(&power_sum_expansion(lambda), &inst.h, inst.n)?;
    let terms = par::map_range(exec, 1 << inst.n, |mask| -> Result<Option<(Poly<Rational>, Op)>> {
        let op = table.operator(mask as u32, &labels)?;
        if op.is_zero() {
            return Ok(None);
        }
        let k = subset_labels(mask as u32, &labels);
        Ok(Some((inst.complement_polynomial(&k), op)))
    });
    let mut out = OpPoly::zero(&labels, inst.n_dim)?;
    for term in terms {
        if let Some((p, op)) = term? {
            out.add_poly_times(&p, &op)?;
        }
    }
    Ok(out)
}

/// Partial-trace formula
/// `Σ_{K⊆[n], K⊆L⊆[m], |L|=|λ|} (m-|λ|)!/(m-|K|)! Π_{l∉K}(u+z_l) Tr_{L∖K}(h^{(L∖K)} α_λ^{(L)})`,
/// with `m = max(n, |λ|)` by default. Labels above `n` are auxiliary factors.
pub fn build_t_partial_trace(
    lambda: &Partition,
    inst: &GaudinInstance,
    m: Option<usize>,
    exec: Execution,
) -> Result<OpPoly> {
    inst.validate()?;
    let r = lambda.size();
    let min_m = inst.n.max(r);
    let m = m.unwrap_or(min_m);
    if m < min_m {
        return domain(format!("m = {m} is below max(n, |λ|) = {min_m}"));
    }
    let labels = inst.labels();
    let base_labels: Vec<usize> = (1..=r).collect();
    let alpha = Op::group_algebra_operator(&alpha_element(lambda, &base_labels)?, &base_labels, inst.n_dim)?;
    let subsets: Vec<Vec<usize>> = (1..=m).combinations(r).collect();
    let partials = par::map(exec, &subsets, |l| -> Result<Vec<(Poly<Rational>, Op)>> {
        let alpha_l = alpha.relabel(l)?;
        let sites: Vec<usize> = l.iter().copied().filter(|&x| x <= inst.n).collect();
        let mut out = Vec::new();
        for kmask in 0u32..(1 << sites.len()) {
            let k = subset_labels(kmask, &sites);
            let traced: Vec<usize> = l.iter().copied().filter(|x| !k.contains(x)).collect();
            let hx = Op::diagonal_h_action(&inst.h, &traced, l)?;
            let reduced = hx.matmul_with(&alpha_l, Execution::Sequential)?.partial_trace(&traced)?;
            if reduced.is_zero() {
                continue;
            }
            let coef = factorial_q(m - r) / factorial_q(m - k.len());
            let poly = inst.complement_polynomial(&k).scale(&coef);
            out.push((poly, reduced.embed(&labels)?));
        }
        Ok(out)
    });
    let mut out = OpPoly::zero(&labels, inst.n_dim)?;
    for group in partials {
        for (p, op) in group? {
            out.add_poly_times(&p, &op)?;
        }
    }
    Ok(out)
}

/// `β_λ(u) = Σ_{K⊆[n], |K|=|λ|} Π_{l∉K}(u+z_l) α_λ^{(K)}`.
pub fn build_beta(lambda: &Partition, inst: &GaudinInstance) -> Result<OpPoly> {
    inst.validate()?;
    let labels = inst.labels();
    let mut out = OpPoly::zero(&labels, inst.n_dim)?;
    for k in labels.iter().copied().combinations(lambda.size()) {
        let alpha = Op::group_algebra_operator(&alpha_element(lambda, &k)?, &k, inst.n_dim)?;
        out.add_poly_times(&inst.complement_polynomial(&k), &alpha.embed(&labels)?)?;
    }
    Ok(out)
}

/// `T_{(1^c)}(u)` for `c = 0..=N` by the definitional route.
pub fn single_columns(inst: &GaudinInstance, exec: Execution) -> Result<Vec<OpPoly>> {
    (0..=inst.n_dim).map(|c| build_t_definitional(&Partition::column(c), inst, exec)).collect()
}

/// Dual Jacobi–Trudi route, building the single columns first.
pub fn build_t_jacobi_trudi(lambda: &Partition, inst: &GaudinInstance, exec: Execution) -> Result<OpPoly> {
    let columns = single_columns(inst, exec)?;
    build_t_jacobi_trudi_from(lambda, inst, &columns, exec)
}

/// `T_λ(u)/P(u) = det(Σ_k (-1)^k C(j-1,k) ∂_u^k [T_{(1^{λ'_i-i+j-k})}(u)/P(u)])` with
/// `P = Π(u+z_l)`, from precomputed columns `columns[c] = T_{(1^c)}(u)`
/// (columns past the end are zero).
///
/// Entry `(i,j)` is brought to the form `Num_{ij}/P^j`, so the determinant is
/// `det(Num)/P^D` with `D = λ_1(λ_1+1)/2`. The polynomial `det(Num)` is
/// recovered exactly by evaluation at `deg + 1` integer points and Lagrange
/// interpolation, then divided by `P^{D-1}`. A nonzero remainder or a degree
/// above `n` is an identity violation.
pub fn build_t_jacobi_trudi_from(
    lambda: &Partition,
    inst: &GaudinInstance,
    columns: &[OpPoly],
    exec: Execution,
) -> Result<OpPoly> {
    inst.validate()?;
    let labels = inst.labels();
    let p = inst.site_polynomial();
    let size = lambda.first();
    if size == 0 {
        return OpPoly::scalar(&p, &labels, inst.n_dim);
    }
    let conj = lambda.conjugate();
    let dp = p.derivative();
    // numerators of ∂^k (T_c / P) = N_{c,k} / P^{k+1}
    let numerators: Vec<Vec<OpPoly>> = columns
        .iter()
        .map(|col| {
            let mut ns = vec![col.clone()];
            for k in 0..size.saturating_sub(1) {
                let prev = &ns[k];
                let next =
                    prev.derivative().mul_scalar_poly(&p).sub(&prev.mul_scalar_poly(&dp).scale(&int(k as i64 + 1)))?;
                ns.push(next);
            }
            Ok(ns)
        })
        .collect::<Result<_>>()?;
    let mut entries: Vec<Vec<OpPoly>> = Vec::with_capacity(size);
    for i in 1..=size {
        let mut row = Vec::with_capacity(size);
        for j in 1..=size {
            let mut acc = OpPoly::zero(&labels, inst.n_dim)?;
            for k in 0..j {
                let c = conj.part(i) as i64 - i as i64 + j as i64 - k as i64;
                if c < 0 || c as usize >= columns.len() {
                    continue;
                }
                let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                let term =
                    numerators[c as usize][k].mul_scalar_poly(&p.pow(j - 1 - k)).scale(&(sign * binomial_q(j - 1, k)));
                acc = acc.add(&term)?;
            }
            row.push(acc);
        }
        entries.push(row);
    }
    let bound: usize = (0..size).map(|j| (0..size).filter_map(|i| entries[i][j].degree()).max().unwrap_or(0)).sum();
    let dets = par::map_range(exec, bound + 1, |s| {
        let t = int(s as i64);
        let at: Vec<Vec<Option<Op>>> =
            entries.iter().map(|row| row.iter().map(|e| Some(e.eval(&t)).filter(|o| !o.is_zero())).collect()).collect();
        operator_det(&at, &labels, inst.n_dim)
    });
    let mut numerator = OpPoly::zero(&labels, inst.n_dim)?;
    for (s, det) in dets.into_iter().enumerate() {
        let det = det?;
        if !det.is_zero() {
            numerator.add_poly_times(&lagrange_basis(s, bound), &det)?;
        }
    }
    let depth = size * (size + 1) / 2;
    let (quot, rem) = numerator.div_rem_monic(&p.pow(depth - 1));
    if !rem.is_zero() {
        return Err(Error::IdentityViolation(format!(
            "Jacobi–Trudi determinant for {lambda} leaves a nonzero remainder"
        )));
    }
    if quot.degree().is_some_and(|d| d > inst.n) {
        return Err(Error::IdentityViolation(format!(
            "Jacobi–Trudi result for {lambda} has degree above n = {}",
            inst.n
        )));
    }
    Ok(quot)
}

/// `Π_{q≠s, 0≤q≤top} (u-q)/(s-q)`.
fn lagrange_basis(s: usize, top: usize) -> Poly<Rational> {
    let mut num = Poly::one();
    let mut den = Rational::one();
    for q in (0..=top).filter(|&q| q != s) {
        num = num * Poly::linear(-int(q as i64));
        den *= int(s as i64 - q as i64);
    }
    num.scale(&den.recip())
}

/// Determinant of a matrix of pairwise commuting operators (`None` = zero) by
/// the row-subset expansion.
fn operator_det(m: &[Vec<Option<Op>>], labels: &[usize], n_dim: usize) -> Result<Op> {
    let n = m.len();
    let mut dp: Vec<Option<Op>> = vec![None; 1 << n];
    dp[0] = Some(Op::identity(labels, n_dim)?);
    for mask in 0usize..(1 << n) {
        let Some(base) = dp[mask].clone() else {
            continue;
        };
        let col = mask.count_ones() as usize;
        if col == n {
            continue;
        }
        for (row, entries) in m.iter().enumerate() {
            if mask & (1 << row) != 0 {
                continue;
            }
            let Some(e) = &entries[col] else {
                continue;
            };
            let mut term = base.matmul_with(e, Execution::Sequential)?;
            if (mask >> (row + 1)).count_ones() % 2 == 1 {
                term = term.neg();
            }
            let next = mask | (1 << row);
            dp[next] = Some(match dp[next].take() {
                Some(acc) => acc.add(&term)?,
                None => term,
            });
        }
    }
    Ok(dp[(1 << n) - 1].take().unwrap_or_else(|| Op::zero(labels, n_dim).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Permutation;
    use crate::scalar::rat;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn inst() -> GaudinInstance {
        GaudinInstance::new(vec![rat(1, 2), int(3)], vec![int(1), rat(-2, 3)]).unwrap()
    }

    #[test]
    fn empty_partition_is_site_polynomial() {
        let g = inst();
        let expected = OpPoly::scalar(&g.site_polynomial(), &[1, 2], 2).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(build_t_definitional(&Partition::empty(), &g, exec).unwrap(), expected);
            assert_eq!(build_t_partial_trace(&Partition::empty(), &g, None, exec).unwrap(), expected);
            assert_eq!(build_t_jacobi_trudi(&Partition::empty(), &g, exec).unwrap(), expected);
        }
        assert_eq!(build_beta(&Partition::empty(), &g).unwrap(), expected);
    }

    #[test]
    fn second_row_closed_form() {
        let g = inst();
        let t = build_t_definitional(&p("2"), &g, Execution::Sequential).unwrap().eval(&int(0));
        let f = [1, 2];
        let tr = &g.h[0] + &g.h[1];
        let tr2 = &g.h[0] * &g.h[0] + &g.h[1] * &g.h[1];
        let zz = &g.z[0] * &g.z[1];
        let mut expected = Op::scalar(&f, 2, zz * (&tr * &tr + tr2) / int(2)).unwrap();
        for k in 1..=2 {
            let other = &g.z[2 - k];
            let term =
                Op::scalar(&f, 2, tr.clone()).unwrap().add(&Op::diagonal_h_action(&g.h, &[k], &f).unwrap()).unwrap();
            expected = expected.add(&term.scale(other)).unwrap();
        }
        let swap = Op::permutation_operator(&Permutation::transposition(&f, 1, 2).unwrap(), &f, 2).unwrap();
        expected = expected.add(&Op::identity(&f, 2).unwrap().add(&swap).unwrap()).unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn routes_agree_small() {
        let g = inst();
        let columns = single_columns(&g, Execution::Sequential).unwrap();
        for l in Partition::up_to(3) {
            let a = build_t_definitional(&l, &g, Execution::Sequential).unwrap();
            let b = build_t_partial_trace(&l, &g, None, Execution::Sequential).unwrap();
            let c = build_t_jacobi_trudi_from(&l, &g, &columns, Execution::Sequential).unwrap();
            assert_eq!(a, b, "{l}");
            assert_eq!(a, c, "{l}");
            assert!(a.degree().is_none_or(|d| d <= 2));
            let wider = build_t_partial_trace(&l, &g, Some(g.n.max(l.size()) + 2), Execution::Sequential).unwrap();
            assert_eq!(a, wider, "{l}");
        }
    }

    #[test]
    fn beta_is_h_zero_specialization() {
        let g = inst().with_zero_h();
        for l in Partition::up_to(3) {
            let a = build_t_definitional(&l, &g, Execution::Sequential).unwrap();
            assert_eq!(a, build_beta(&l, &g).unwrap(), "{l}");
        }
    }

    #[test]
    fn partial_trace_rejects_small_m() {
        assert!(build_t_partial_trace(&p("2,1"), &inst(), Some(2), Execution::Sequential).is_err());
    }
}
