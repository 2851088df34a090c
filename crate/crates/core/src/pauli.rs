//! Phase-free Pauli strings in symplectic form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    /// Rank in the I < X < Y < Z order.
    pub fn rank(self) -> u8 {
        match self {
            Letter::I => 0,
            Letter::X => 1,
            Letter::Y => 2,
            Letter::Z => 3,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

type Words = SmallVec<[u64; 2]>;

/// An n-qubit Pauli operator without phase.
///
/// The x-bits occupy the first `n_words` words and the z-bits the next
/// `n_words`; qubit 0 is the least significant bit of the first word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    words: Words,
}

#[inline]
fn n_words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        PauliString { n: n_qubits, words: SmallVec::from_elem(0, 2 * n_words(n_qubits)) }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    /// A string with `letter` on `qubit` and identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = PauliString::identity(n_qubits);
        p.set(qubit, letter);
        p
    }

    /// Build from x/z masks (n ≤ 64).
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Self {
        assert!(n_qubits <= 64, "from_masks supports at most 64 qubits");
        let mut p = PauliString::identity(n_qubits);
        let keep = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        p.words[0] = x & keep;
        p.words[1] = z & keep;
        p
    }

    /// x/z masks of the first 64 qubits.
    pub fn masks(&self) -> (u64, u64) {
        let w = self.nw();
        (self.words[0], self.words[w])
    }

    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let mut p = PauliString::identity(n_qubits);
        for q in 0..n_qubits {
            p.set(q, Letter::ALL[rng.random_range(0..4)]);
        }
        p
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn nw(&self) -> usize {
        self.words.len() / 2
    }

    #[inline]
    pub fn x_words(&self) -> &[u64] {
        &self.words[..self.nw()]
    }

    #[inline]
    pub fn z_words(&self) -> &[u64] {
        &self.words[self.nw()..]
    }

    /// Raw symplectic words: x-words followed by z-words.
    #[inline]
    pub(crate) fn raw_words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn raw_words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn x(&self, q: usize) -> bool {
        (self.words[q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    pub fn z(&self, q: usize) -> bool {
        (self.words[self.nw() + q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x(q), self.z(q))
    }

    pub fn set(&mut self, q: usize, letter: Letter) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (x, z) = letter.bits();
        let nw = self.nw();
        let bit = 1u64 << (q % 64);
        let (xi, zi) = (q / 64, nw + q / 64);
        if x {
            self.words[xi] |= bit;
        } else {
            self.words[xi] &= !bit;
        }
        if z {
            self.words[zi] |= bit;
        } else {
            self.words[zi] &= !bit;
        }
    }

    fn check_dims(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Channel-level product (phase dropped).
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_dims(other)?;
        let mut out = self.clone();
        out.mul_assign(other);
        Ok(out)
    }

    /// In-place product; panics on dimension mismatch.
    #[inline]
    pub fn mul_assign(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    /// Operator product with phase: `self · other = i^k · result`.
    pub fn mul_with_phase(&self, other: &PauliString) -> (PauliString, u8) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let nw = self.nw();
        let mut pos = 0u32;
        let mut neg = 0u32;
        for w in 0..nw {
            let (x1, z1) = (self.words[w], self.words[nw + w]);
            let (x2, z2) = (other.words[w], other.words[nw + w]);
            let y1 = x1 & z1;
            let xo1 = x1 & !z1;
            let zo1 = !x1 & z1;
            pos += (y1 & z2 & !x2).count_ones() + (xo1 & z2 & x2).count_ones() + (zo1 & x2 & !z2).count_ones();
            neg += (y1 & x2 & !z2).count_ones() + (xo1 & z2 & !x2).count_ones() + (zo1 & x2 & z2).count_ones();
        }
        let mut out = self.clone();
        out.mul_assign(other);
        (out, (pos as i64 - neg as i64).rem_euclid(4) as u8)
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let nw = self.nw();
        let mut acc = 0u32;
        for w in 0..nw {
            acc ^= ((self.words[w] & other.words[nw + w]) ^ (self.words[nw + w] & other.words[w])).count_ones();
        }
        acc & 1 == 0
    }

    pub fn weight(&self) -> usize {
        let nw = self.nw();
        (0..nw).map(|w| (self.words[w] | self.words[nw + w]).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True if every letter is I or Z.
    pub fn is_z_type(&self) -> bool {
        self.x_words().iter().all(|&w| w == 0)
    }

    /// Boundary reduction: Z→I, Y→X.
    pub fn xi_reduce(&self) -> PauliString {
        let mut out = self.clone();
        let nw = out.nw();
        for w in &mut out.words[nw..] {
            *w = 0;
        }
        out
    }

    /// Bit mask of qubits carrying a non-identity letter.
    pub fn support(&self) -> SmallVec<[u64; 1]> {
        let nw = self.nw();
        (0..nw).map(|w| self.words[w] | self.words[nw + w]).collect()
    }

    pub fn support_within(&self, mask: &[u64]) -> bool {
        let nw = self.nw();
        (0..nw).all(|w| (self.words[w] | self.words[nw + w]) & !mask[w] == 0)
    }

    pub fn support_qubits(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x(q) || self.z(q)).collect()
    }

    /// Lexicographic order with I < X < Y < Z and qubit 0 most significant.
    pub fn lex_compare(&self, other: &PauliString) -> Result<Ordering> {
        self.check_dims(other)?;
        Ok(self.lex_cmp_unchecked(other))
    }

    pub fn lex_cmp_unchecked(&self, other: &PauliString) -> Ordering {
        let nw = self.nw();
        for w in 0..nw {
            let diff = (self.words[w] ^ other.words[w]) | (self.words[nw + w] ^ other.words[nw + w]);
            if diff != 0 {
                let q = w * 64 + diff.trailing_zeros() as usize;
                return self.letter(q).rank().cmp(&other.letter(q).rank());
            }
        }
        Ordering::Equal
    }

    /// Restriction to the listed qubits, as a small string.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.letter(q));
        }
        out
    }

    /// Embed a small string onto `qubits` of an n-qubit identity.
    pub fn embed(&self, n_qubits: usize, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(n_qubits);
        for (i, &q) in qubits.iter().enumerate() {
            out.set(q, self.letter(i));
        }
        out
    }

    /// All 4^n strings on n qubits, in index order of (x mask, z mask).
    pub fn all(n_qubits: usize) -> impl Iterator<Item = PauliString> {
        assert!(n_qubits <= 16);
        let size = 1u64 << n_qubits;
        (0..size * size).map(move |i| PauliString::from_masks(n_qubits, i % size, i / size))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used heavily in tests: `p("IXZ")`.
pub fn p(s: &str) -> PauliString {
    s.parse().expect("valid Pauli string")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("Y"));
        assert_eq!(p("XY").multiply(&p("YX")).unwrap(), p("ZZ"));
        assert!(p("XYZ").multiply(&p("XYZ")).unwrap().is_identity());
        assert!(p("X").multiply(&p("XX")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
    }

    #[test]
    fn weight_and_reduction() {
        assert_eq!(p("IIII").weight(), 0);
        assert_eq!(p("IXXZ").weight(), 3);
        assert_eq!(p("ZZ").weight(), 2);
        assert_eq!(p("IXXZY").xi_reduce(), p("IXXIX"));
        assert_eq!(p("IYYIX").xi_reduce(), p("IXXIX"));
        assert_eq!(p("IIII").xi_reduce(), p("IIII"));
    }

    #[test]
    fn lex_order() {
        assert_eq!(p("IIX").lex_compare(&p("IIY")).unwrap(), Ordering::Less);
        assert_eq!(p("IIZ").lex_compare(&p("IXI")).unwrap(), Ordering::Less);
        assert_eq!(p("XYZ").lex_compare(&p("XYZ")).unwrap(), Ordering::Equal);
        assert_eq!(p("ZII").lex_compare(&p("IZZ")).unwrap(), Ordering::Greater);
    }

    #[test]
    fn parse_round_trip() {
        let s = "IXYZZYXI";
        assert_eq!(p(s).to_string(), s);
        assert!("IXA".parse::<PauliString>().is_err());
        assert!("ixz".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn wide_strings_use_multiple_words() {
        let mut a = PauliString::identity(130);
        a.set(0, Letter::X);
        a.set(129, Letter::Z);
        let mut b = PauliString::identity(130);
        b.set(129, Letter::X);
        assert_eq!(a.weight(), 2);
        assert!(!a.commutes(&b).unwrap());
        let c = a.multiply(&b).unwrap();
        assert_eq!(c.letter(129), Letter::Y);
        assert_eq!(c.to_string().parse::<PauliString>().unwrap(), c);
    }

    #[test]
    fn phase_of_products() {
        // XZ = -iY, ZX = iY, XY = iZ
        assert_eq!(p("X").mul_with_phase(&p("Z")), (p("Y"), 3));
        assert_eq!(p("Z").mul_with_phase(&p("X")), (p("Y"), 1));
        assert_eq!(p("X").mul_with_phase(&p("Y")), (p("Z"), 1));
        assert_eq!(p("XX").mul_with_phase(&p("ZZ")), (p("YY"), 2));
    }

    #[test]
    fn serde_as_string() {
        let s = serde_json::to_string(&p("XIZ")).unwrap();
        assert_eq!(s, "\"XIZ\"");
        let back: PauliString = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p("XIZ"));
    }
}
