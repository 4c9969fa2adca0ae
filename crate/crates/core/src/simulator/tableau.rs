//! Bit-packed stabilizer tableau (Aaronson–Gottesman form).
//!
//! Rows `0..n` are destabilizers, `n..2n` stabilizers and row `2n` is
//! scratch space. Each row stores its X words followed by its Z words.

use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    signs: Vec<bool>,
}

#[inline]
fn split(q: usize) -> (usize, u64) {
    (q / 64, 1u64 << (q % 64))
}

impl Tableau {
    /// |0…0⟩ on `n` qubits.
    pub fn new(n: usize) -> Tableau {
        let words = n.div_ceil(64).max(1);
        let mut t = Tableau { n, words, bits: vec![0; (2 * n + 1) * 2 * words], signs: vec![false; 2 * n + 1] };
        t.reset_all();
        t
    }

    pub fn reset_all(&mut self) {
        self.bits.fill(0);
        self.signs.fill(false);
        for q in 0..self.n {
            let (w, m) = split(q);
            let dx = self.x_off(q);
            self.bits[dx + w] |= m;
            let sz = self.z_off(self.n + q);
            self.bits[sz + w] |= m;
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn stride(&self) -> usize {
        2 * self.words
    }

    #[inline]
    fn x_off(&self, row: usize) -> usize {
        row * self.stride()
    }

    #[inline]
    fn z_off(&self, row: usize) -> usize {
        row * self.stride() + self.words
    }

    #[inline]
    pub fn x_bit(&self, row: usize, q: usize) -> bool {
        let (w, m) = split(q);
        self.bits[self.x_off(row) + w] & m != 0
    }

    #[inline]
    pub fn z_bit(&self, row: usize, q: usize) -> bool {
        let (w, m) = split(q);
        self.bits[self.z_off(row) + w] & m != 0
    }

    pub fn sign(&self, row: usize) -> bool {
        self.signs[row]
    }

    pub fn h(&mut self, q: usize) {
        let (w, m) = split(q);
        let stride = self.stride();
        let words = self.words;
        for (row, chunk) in self.bits.chunks_exact_mut(stride).take(2 * self.n).enumerate() {
            let x = chunk[w];
            let z = chunk[words + w];
            if x & z & m != 0 {
                self.signs[row] ^= true;
            }
            let t = (x ^ z) & m;
            chunk[w] ^= t;
            chunk[words + w] ^= t;
        }
    }

    pub fn s(&mut self, q: usize) {
        let (w, m) = split(q);
        let stride = self.stride();
        let words = self.words;
        for (row, chunk) in self.bits.chunks_exact_mut(stride).take(2 * self.n).enumerate() {
            let x = chunk[w] & m;
            let z = chunk[words + w] & m;
            if x & z != 0 {
                self.signs[row] ^= true;
            }
            chunk[words + w] ^= x;
        }
    }

    pub fn sdg(&mut self, q: usize) {
        let (w, m) = split(q);
        let stride = self.stride();
        let words = self.words;
        for (row, chunk) in self.bits.chunks_exact_mut(stride).take(2 * self.n).enumerate() {
            let x = chunk[w] & m;
            let z = chunk[words + w] & m;
            if x != 0 && z == 0 {
                self.signs[row] ^= true;
            }
            chunk[words + w] ^= x;
        }
    }

    /// Applies a Pauli: flips the sign of every row anticommuting with it.
    pub fn pauli(&mut self, q: usize, x: bool, z: bool) {
        let (w, m) = split(q);
        let stride = self.stride();
        let words = self.words;
        for (row, chunk) in self.bits.chunks_exact_mut(stride).take(2 * self.n).enumerate() {
            let rx = chunk[w] & m != 0;
            let rz = chunk[words + w] & m != 0;
            if (rx && z) ^ (rz && x) {
                self.signs[row] ^= true;
            }
        }
    }

    pub fn x(&mut self, q: usize) {
        self.pauli(q, true, false);
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        let (wc, mc) = split(control);
        let (wt, mt) = split(target);
        let stride = self.stride();
        let words = self.words;
        for (row, chunk) in self.bits.chunks_exact_mut(stride).take(2 * self.n).enumerate() {
            let xc = chunk[wc] & mc != 0;
            let zc = chunk[words + wc] & mc != 0;
            let xt = chunk[wt] & mt != 0;
            let zt = chunk[words + wt] & mt != 0;
            if xc && zt && (xt == zc) {
                self.signs[row] ^= true;
            }
            if xc {
                chunk[wt] ^= mt;
            }
            if zt {
                chunk[words + wc] ^= mc;
            }
        }
    }

    /// Row `h` ← row `i` · row `h`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let words = self.words;
        let stride = self.stride();
        let (hi, lo) = if h > i { (h, i) } else { (i, h) };
        let (left, right) = self.bits.split_at_mut(hi * stride);
        let lo_row = &mut left[lo * stride..(lo + 1) * stride];
        let hi_row = &mut right[..stride];
        let (hrow, irow) = if h > i { (hi_row, lo_row) } else { (lo_row, hi_row) };

        let mut phase: i32 = 0;
        for w in 0..words {
            let (x1, z1) = (irow[w], irow[words + w]);
            let (x2, z2) = (hrow[w], hrow[words + w]);
            let px = x1 & !z1;
            let py = x1 & z1;
            let pz = !x1 & z1;
            let qx = x2 & !z2;
            let qy = x2 & z2;
            let qz = !x2 & z2;
            let pos = (px & qy) | (py & qz) | (pz & qx);
            let neg = (px & qz) | (py & qx) | (pz & qy);
            phase += pos.count_ones() as i32 - neg.count_ones() as i32;
            hrow[w] = x1 ^ x2;
            hrow[words + w] = z1 ^ z2;
        }
        let total = 2 * (self.signs[h] as i32) + 2 * (self.signs[i] as i32) + phase;
        debug_assert!(total.rem_euclid(2) == 0);
        self.signs[h] = total.rem_euclid(4) == 2;
    }

    fn clear_row(&mut self, row: usize) {
        let off = self.x_off(row);
        let stride = self.stride();
        self.bits[off..off + stride].fill(0);
        self.signs[row] = false;
    }

    fn copy_row(&mut self, from: usize, to: usize) {
        let stride = self.stride();
        self.bits.copy_within(from * stride..(from + 1) * stride, to * stride);
        self.signs[to] = self.signs[from];
    }

    /// Z measurement. Returns `(outcome, was_random)`.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> (bool, bool) {
        let n = self.n;
        let (w, m) = split(q);
        let stride = self.stride();
        let pivot = (n..2 * n).find(|&row| self.bits[row * stride + w] & m != 0);
        match pivot {
            Some(p) => {
                // Row p - n is overwritten below.
                for row in 0..2 * n {
                    if row != p && row != p - n && self.bits[row * stride + w] & m != 0 {
                        self.rowsum(row, p);
                    }
                }
                self.copy_row(p, p - n);
                self.clear_row(p);
                let zo = self.z_off(p);
                self.bits[zo + w] |= m;
                let outcome = rng.gen::<bool>();
                self.signs[p] = outcome;
                (outcome, true)
            }
            None => {
                let scratch = 2 * n;
                self.clear_row(scratch);
                for row in 0..n {
                    if self.bits[row * stride + w] & m != 0 {
                        self.rowsum(scratch, row + n);
                    }
                }
                (self.signs[scratch], false)
            }
        }
    }

    /// Resets `q` to |0⟩.
    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) {
        if self.measure(q, rng).0 {
            self.x(q);
        }
    }

    /// Symplectic inner product of two rows (true = anticommute).
    pub fn rows_anticommute(&self, a: usize, b: usize) -> bool {
        let (xa, za) = (self.x_off(a), self.z_off(a));
        let (xb, zb) = (self.x_off(b), self.z_off(b));
        let mut acc = 0u32;
        for w in 0..self.words {
            acc += (self.bits[xa + w] & self.bits[zb + w]).count_ones();
            acc += (self.bits[za + w] & self.bits[xb + w]).count_ones();
        }
        acc % 2 == 1
    }

    /// Stabilizers commute pairwise, destabilizers pairwise, and destabilizer
    /// `i` anticommutes exactly with stabilizer `i`.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if self.rows_anticommute(n + i, n + j) || self.rows_anticommute(i, j) {
                    return false;
                }
                if self.rows_anticommute(i, n + j) != (i == j) {
                    return false;
                }
            }
        }
        true
    }

    /// Stabilizer row `i` as a string over `IXYZ`, with leading sign.
    pub fn stabilizer_string(&self, i: usize) -> String {
        let row = self.n + i;
        let mut s = String::from(if self.signs[row] { "-" } else { "+" });
        for q in 0..self.n {
            s.push(match (self.x_bit(row, q), self.z_bit(row, q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            });
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one(n: usize, f: impl Fn(&mut Tableau)) -> Vec<String> {
        let mut t = Tableau::new(n);
        f(&mut t);
        assert!(t.is_valid());
        (0..n).map(|i| t.stabilizer_string(i)).collect()
    }

    #[test]
    fn hadamard_swaps_z_and_x() {
        assert_eq!(one(1, |t| t.h(0)), vec!["+X"]);
        assert_eq!(
            one(1, |t| {
                t.h(0);
                t.h(0)
            }),
            vec!["+Z"]
        );
    }

    #[test]
    fn phase_maps_x_to_y() {
        assert_eq!(
            one(1, |t| {
                t.h(0);
                t.s(0)
            }),
            vec!["+Y"]
        );
        assert_eq!(
            one(1, |t| {
                t.h(0);
                t.s(0);
                t.s(0)
            }),
            vec!["-X"]
        );
        assert_eq!(
            one(1, |t| {
                t.h(0);
                t.sdg(0)
            }),
            vec!["-Y"]
        );
        assert_eq!(
            one(1, |t| {
                t.h(0);
                t.s(0);
                t.sdg(0)
            }),
            vec!["+X"]
        );
    }

    #[test]
    fn cnot_conjugation() {
        // X⊗I -> X⊗X
        assert_eq!(
            one(2, |t| {
                t.h(0);
                t.cx(0, 1)
            }),
            vec!["+XX", "+ZZ"]
        );
        // I⊗Z stays on the target and picks up Z on the control
        assert_eq!(one(2, |t| t.cx(0, 1)), vec!["+ZI", "+ZZ"]);
    }

    #[test]
    fn x_flips_z_sign() {
        assert_eq!(one(1, |t| t.x(0)), vec!["-Z"]);
    }

    #[test]
    fn measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = Tableau::new(2);
        assert_eq!(t.measure(0, &mut rng), (false, false));
        t.x(1);
        assert_eq!(t.measure(1, &mut rng), (true, false));
        t.h(0);
        let (first, random) = t.measure(0, &mut rng);
        assert!(random);
        assert_eq!(t.measure(0, &mut rng), (first, false));
        assert!(t.is_valid());
    }

    #[test]
    fn bell_pair_outcomes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let mut t = Tableau::new(2);
            t.h(0);
            t.cx(0, 1);
            let (a, _) = t.measure(0, &mut rng);
            let (b, r) = t.measure(1, &mut rng);
            assert_eq!(a, b);
            assert!(!r);
        }
    }

    #[test]
    fn wide_tableau_spans_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut t = Tableau::new(130);
        t.h(3);
        t.cx(3, 129);
        t.cx(129, 70);
        let (a, _) = t.measure(3, &mut rng);
        assert_eq!(t.measure(129, &mut rng).0, a);
        assert_eq!(t.measure(70, &mut rng).0, a);
        assert!(t.is_valid());
    }
}
