//! State-vector reference simulator for small circuits.

use num_complex::Complex64;
use rand::Rng;

pub const MAX_DENSE_QUBITS: usize = 14;

pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Calls `f` on every amplitude pair differing only in bit `q`.
    #[inline]
    fn for_pairs(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let m = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * m) {
            let (lo, hi) = block.split_at_mut(m);
            for (u, v) in lo.iter_mut().zip(hi) {
                f(u, v);
            }
        }
    }

    /// Multiplies the amplitudes with bit `q` set by `phase`.
    fn phase(&mut self, q: usize, phase: Complex64) {
        self.for_pairs(q, |_, v| *v *= phase);
    }

    pub fn h(&mut self, q: usize) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.for_pairs(q, |u, v| {
            let (a, b) = (*u, *v);
            *u = (a + b) * r;
            *v = (a - b) * r;
        });
    }

    pub fn s(&mut self, q: usize) {
        self.phase(q, Complex64::new(0.0, 1.0));
    }

    pub fn sdg(&mut self, q: usize) {
        self.phase(q, Complex64::new(0.0, -1.0));
    }

    pub fn x(&mut self, q: usize) {
        self.for_pairs(q, std::mem::swap);
    }

    pub fn z(&mut self, q: usize) {
        self.phase(q, Complex64::new(-1.0, 0.0));
    }

    pub fn y(&mut self, q: usize) {
        let i = Complex64::new(0.0, 1.0);
        self.for_pairs(q, |u, v| {
            let (a, b) = (*u, *v);
            *u = -i * b;
            *v = i * a;
        });
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        let mc = 1usize << control;
        let m = 1usize << target;
        for (k, block) in self.amps.chunks_exact_mut(2 * m).enumerate() {
            let base = k * 2 * m;
            let (lo, hi) = block.split_at_mut(m);
            for (j, (u, v)) in lo.iter_mut().zip(hi).enumerate() {
                if (base + j) & mc != 0 {
                    std::mem::swap(u, v);
                }
            }
        }
    }

    pub fn prob_one(&self, q: usize) -> f64 {
        let m = 1usize << q;
        self.amps.chunks_exact(2 * m).flat_map(|b| &b[m..]).map(|a| a.norm_sqr()).sum()
    }

    /// Born-rule Z measurement with collapse.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        let outcome = rng.gen::<f64>() < self.prob_one(q);
        self.project(q, outcome);
        outcome
    }

    /// Collapses `q` onto `outcome`, which must have nonzero probability.
    pub fn project(&mut self, q: usize, outcome: bool) {
        let p1 = self.prob_one(q);
        let m = 1usize << q;
        let scale = 1.0 / if outcome { p1 } else { 1.0 - p1 }.sqrt();
        let zero = Complex64::new(0.0, 0.0);
        for block in self.amps.chunks_exact_mut(2 * m) {
            let (lo, hi) = block.split_at_mut(m);
            let (keep, drop) = if outcome { (hi, lo) } else { (lo, hi) };
            keep.iter_mut().for_each(|a| *a *= scale);
            drop.fill(zero);
        }
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) {
        if self.measure(q, rng) {
            self.x(q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hadamard_then_cx_makes_bell_pair() {
        let mut s = StateVector::new(2);
        s.h(0);
        s.cx(0, 1);
        let a = s.amplitudes();
        assert!((a[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((a[3].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(a[1].norm() < 1e-12 && a[2].norm() < 1e-12);
    }

    #[test]
    fn sdg_undoes_s() {
        let mut s = StateVector::new(1);
        s.h(0);
        s.s(0);
        s.sdg(0);
        s.h(0);
        assert!((s.prob_one(0)).abs() < 1e-12);
    }

    #[test]
    fn collapse_is_repeatable() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = StateVector::new(1);
        s.h(0);
        let first = s.measure(0, &mut rng);
        for _ in 0..10 {
            assert_eq!(s.measure(0, &mut rng), first);
        }
    }
}
