use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmetric::code::{delsarte_dual, Guard, Strategy as Sweep};
use rankmetric::gf::linalg::{self, Matrix};
use rankmetric::gf::FieldCtx;
use rankmetric::moore::{self, MoorePolySet};
use rankmetric::variety;
use rankmetric::{FieldElem, FieldTower, LinPoly, RankMetricCode};

/// (p, h, n): GF(16)/GF(2), GF(27)/GF(3), GF(64)/GF(4).
const TOWERS: [(u64, u32, u32); 3] = [(2, 1, 4), (3, 1, 3), (2, 2, 3)];

fn tower(i: usize) -> FieldTower {
    let (p, h, n) = TOWERS[i];
    FieldTower::new(p, h, n, 1).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_elem(f: &FieldCtx, r: &mut ChaCha8Rng) -> FieldElem {
    FieldElem(r.gen_range(0..f.order()))
}

fn random_code(t: &FieldTower, k: usize, r: &mut ChaCha8Rng) -> RankMetricCode {
    loop {
        let basis = (0..k).map(|_| LinPoly::random(t.ext().clone(), r)).collect();
        if let Ok(c) = RankMetricCode::new(basis) {
            return c;
        }
    }
}

fn mat_mul(f: &FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| f.sum((0..n).map(|l| f.mul(a[i][l], b[l][j])))).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative_and_matches_matrices(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let s = t.ext().clone();
        let (f, g, h) = (LinPoly::random(s.clone(), &mut r), LinPoly::random(s.clone(), &mut r), LinPoly::random(s.clone(), &mut r));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.as_matrix(), mat_mul(t.base(), &f.as_matrix(), &g.as_matrix()));
        for _ in 0..4 {
            let x = random_elem(t.mid(), &mut r);
            prop_assert_eq!(fg.evaluate(x), f.evaluate(g.evaluate(x)));
        }
    }

    #[test]
    fn rank_nullity_and_kernel(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let f = LinPoly::random(t.ext().clone(), &mut r);
        prop_assert_eq!(f.rank() + f.kernel_dim(), t.n() as usize);
        let ker = f.kernel_basis();
        prop_assert_eq!(ker.len(), f.kernel_dim());
        prop_assert_eq!(t.ext().fq_rank(&ker), ker.len());
        for &x in &ker {
            prop_assert!(f.evaluate(x).is_zero());
        }
    }

    #[test]
    fn evaluation_is_fq_linear(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let s = t.ext();
        let fld = t.mid();
        let f = LinPoly::random(s.clone(), &mut r);
        let (x, y) = (random_elem(fld, &mut r), random_elem(fld, &mut r));
        let (a, b) = (s.embed(random_elem(t.base(), &mut r)), s.embed(random_elem(t.base(), &mut r)));
        let lhs = f.evaluate(fld.add(fld.mul(a, x), fld.mul(b, y)));
        let rhs = fld.add(fld.mul(a, f.evaluate(x)), fld.mul(b, f.evaluate(y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_and_norm(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let s = t.ext();
        let fld = t.mid();
        let base = t.base();
        let (x, y) = (random_elem(fld, &mut r), random_elem(fld, &mut r));
        let c = random_elem(base, &mut r);
        let tr = |v| s.trace(v).unwrap();
        let nm = |v| s.norm(v).unwrap();
        prop_assert_eq!(tr(fld.add(x, y)), base.add(tr(x), tr(y)));
        prop_assert_eq!(tr(s.scale(c, x)), base.mul(c, tr(x)));
        prop_assert_eq!(nm(fld.mul(x, y)), base.mul(nm(x), nm(y)));
        prop_assert_eq!(tr(s.embed(c)), base.mul(base.from_int(t.n() as i64), c));
        prop_assert_eq!(nm(s.embed(c)), base.pow(c, t.n() as u64));
        prop_assert_eq!(tr(s.frobenius(x, 1)), tr(x));
    }

    #[test]
    fn fq_rank_is_invariant_under_scaling(ti in 0..3usize, seed: u64, len in 1..4usize) {
        let t = tower(ti);
        let mut r = rng(seed);
        let fld = t.mid();
        let xs: Vec<FieldElem> = (0..len).map(|_| random_elem(fld, &mut r)).collect();
        let lambda = fld.exp(r.gen_range(0..fld.order() as u64 - 1));
        let scaled: Vec<FieldElem> = xs.iter().map(|&x| fld.mul(lambda, x)).collect();
        let rank = t.ext().fq_rank(&xs);
        prop_assert_eq!(rank, t.ext().fq_rank(&scaled));
        prop_assert!(rank <= len.min(t.n() as usize));
        // appending an F_q-combination never raises the rank
        let c = t.ext().embed(random_elem(t.base(), &mut r));
        let mut ext = xs.clone();
        ext.push(fld.add(xs[0], fld.mul(c, xs[len - 1])));
        prop_assert_eq!(t.ext().fq_rank(&ext), rank);
    }

    #[test]
    fn dual_is_an_involution(ti in 0..3usize, seed: u64, k in 1..3usize) {
        let t = tower(ti);
        let mut r = rng(seed);
        let c = random_code(&t, k, &mut r);
        let d = delsarte_dual(&c).unwrap();
        let d = d.code().unwrap();
        prop_assert_eq!(d.k(), t.n() as usize - k);
        let dd = delsarte_dual(d).unwrap();
        prop_assert!(dd.code().unwrap().same_span(&c));
    }

    #[test]
    fn mrd_routes_agree(ti in 0..3usize, seed: u64, k in 1..3usize) {
        let t = tower(ti);
        let mut r = rng(seed);
        let c = random_code(&t, k, &mut r);
        let g = Guard::default();
        let a = c.is_mrd_with(&g, Sweep::Codewords).unwrap();
        let b = c.is_mrd_with(&g, Sweep::Subspaces).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        for rep in [&a, &b] {
            if let Some(w) = &rep.witness {
                prop_assert!(c.codeword(w).unwrap().kernel_dim() >= k);
            }
        }
        let d = c.min_distance().unwrap();
        prop_assert!(d <= t.n() as usize - k + 1);
        prop_assert_eq!(a.verdict, d == t.n() as usize - k + 1);
    }

    #[test]
    fn equivalence_preserves_distance(seed: u64, k in 1..3usize, rho in 0..4u32) {
        let t = tower(0);
        let mut r = rng(seed);
        let c = random_code(&t, k, &mut r);
        // left factors must be monomial maps for the image to stay F_{q^n}-linear
        let a = t.mid().exp(r.gen_range(0..15));
        let g = LinPoly::monomial(t.ext().clone(), r.gen_range(0..4), a);
        let h = LinPoly::random_invertible_with(t.ext().clone(), &mut r);
        let e = c.transform(&g, &h, rho).unwrap();
        prop_assert_eq!(e.k(), k);
        prop_assert_eq!(c.min_distance().unwrap(), e.min_distance().unwrap());
        let guard = Guard::default();
        prop_assert_eq!(c.weight_distribution(&guard).unwrap(), e.weight_distribution(&guard).unwrap());
    }

    #[test]
    fn normalization_keeps_the_span(ti in 0..3usize, seed: u64, k in 1..4usize) {
        let t = tower(ti);
        let k = k.min(t.n() as usize);
        let mut r = rng(seed);
        let c = random_code(&t, k, &mut r);
        let n = moore::normalize(&c).unwrap();
        prop_assert!(n.code().same_span(&c));
        let flags = n.flags().0;
        prop_assert!(flags[0] && flags[1]);
        let mut tops = n.top_degrees();
        tops.sort_unstable();
        tops.dedup();
        prop_assert_eq!(tops.len(), k);
    }

    #[test]
    fn w_times_v_is_f(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let c = random_code(&t, 2, &mut r);
        let set = MoorePolySet::new(c.basis().to_vec()).unwrap();
        let g = Guard::default();
        let f = variety::build_f(&set, &g).unwrap();
        let v = variety::build_v(t.ext(), 2, &g).unwrap();
        let w = variety::build_w(&set, &g).unwrap();
        prop_assert_eq!(w.mul(&v).unwrap(), f.clone());
        let q = t.q();
        let normalized = moore::normalize(&c).unwrap();
        let expected: u64 = normalized.top_degrees().iter().map(|&m| q.pow(m as u32)).sum::<u64>() - (q + 1);
        prop_assert_eq!(w.degree(), Some(expected));
        // F(α) is the Moore determinant
        let alphas = [random_elem(t.mid(), &mut r), random_elem(t.mid(), &mut r)];
        prop_assert_eq!(f.evaluate(&alphas).unwrap(), moore::moore_det(&set, &alphas).unwrap());
    }

    #[test]
    fn homogenization_recovers_the_polynomial(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let f = LinPoly::random(t.ext().clone(), &mut r);
        prop_assume!(!f.is_zero());
        let h = variety::homogenize_f(&f).unwrap();
        let d = t.q().pow(f.qdeg().unwrap() as u32);
        prop_assert!(h.terms().all(|(m, _)| m.degree() == d));
        for _ in 0..4 {
            let x = random_elem(t.mid(), &mut r);
            prop_assert_eq!(h.evaluate(&[x, FieldElem::ONE]).unwrap(), f.evaluate(x));
        }
    }

    #[test]
    fn translation_round_trips(seed: u64) {
        let t = tower(0);
        let mut r = rng(seed);
        let c = random_code(&t, 2, &mut r);
        let set = MoorePolySet::new(c.basis().to_vec()).unwrap();
        let w = variety::build_w(&set, &Guard::default()).unwrap();
        let fld = t.mid();
        let p = [random_elem(fld, &mut r), random_elem(fld, &mut r)];
        let back = [fld.neg(p[0]), fld.neg(p[1])];
        prop_assert_eq!(w.translate(&p).unwrap().translate(&back).unwrap(), w.clone());
        if !w.is_zero() {
            let lf = variety::translate_lowest_form(&w, &p).unwrap();
            prop_assert_eq!(lf.m == 0, !w.evaluate(&p).unwrap().is_zero());
        }
    }

    #[test]
    fn dependent_points_are_never_witnesses(ti in 0..3usize, seed: u64) {
        let t = tower(ti);
        let mut r = rng(seed);
        let c = random_code(&t, 2, &mut r);
        let set = MoorePolySet::new(c.basis().to_vec()).unwrap();
        let a = random_elem(t.mid(), &mut r);
        let b = t.ext().scale(random_elem(t.base(), &mut r), a);
        prop_assert!(moore::moore_det(&set, &[a, b]).unwrap().is_zero());
        prop_assert!(!moore::verify_witness(&set, &[a, b]).unwrap());
    }

    #[test]
    fn lifting_commutes_with_evaluation(seed: u64) {
        let base = tower(0);
        let lifted = base.with_m(2).unwrap();
        let mut r = rng(seed);
        let f = LinPoly::random(base.ext().clone(), &mut r);
        let g = f.lift(&lifted).unwrap();
        for x in base.mid().elements() {
            prop_assert_eq!(g.evaluate(lifted.embed_mid(x)), lifted.embed_mid(f.evaluate(x)));
        }
    }
}

#[test]
fn moore_determinant_is_alternating() {
    let t = tower(1);
    let mut r = rng(7);
    let c = random_code(&t, 3, &mut r);
    let set = MoorePolySet::new(c.basis().to_vec()).unwrap();
    let fld = t.mid();
    for _ in 0..20 {
        let a: Vec<FieldElem> = (0..3).map(|_| random_elem(fld, &mut r)).collect();
        let swapped = vec![a[1], a[0], a[2]];
        let d = moore::moore_det(&set, &a).unwrap();
        assert_eq!(moore::moore_det(&set, &swapped).unwrap(), fld.neg(d));
        let m = moore::moore_matrix(&set, &a).unwrap();
        assert_eq!(linalg::det(fld, &m), d);
    }
}
