//! The 24-element single-qubit Clifford group (modulo global phase).
//!
//! Each element is identified by where it sends `X` and `Z` under conjugation.
//! Elements are enumerated breadth-first from the identity using right
//! multiplication by `H` and `S`; the word found first becomes the canonical
//! name (`"I"`, `"H"`, `"S"`, `"HS"`, ...), and the corresponding product of
//! `H`/`S` matrices is the canonical matrix.  Products of canonical matrices
//! differ from the canonical matrix of the product by a power of
//! `ω = exp(iπ/4)`, which is tabulated so global phases can be tracked exactly.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::pauli::{Pauli, SignedPauli};

pub type Mat2 = [[Complex64; 2]; 2];

const TOL: f64 = 1e-9;

/// `exp(iπk/4)`.
pub fn omega(k: u8) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * f64::from(k % 8))
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn mat_scale(a: &Mat2, s: Complex64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

fn mat_close(a: &Mat2, b: &Mat2) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < TOL))
}

pub fn pauli_matrix(p: Pauli) -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => [[l, o], [o, l]],
        Pauli::X => [[o, l], [l, o]],
        Pauli::Y => [[o, -i], [i, o]],
        Pauli::Z => [[l, o], [o, -l]],
    }
}

fn hadamard_matrix() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn s_matrix() -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    [[l, o], [o, Complex64::new(0.0, 1.0)]]
}

/// `exp(±iπ/4 P) = (I ± iP)/√2`, the square root of `±iP`.
pub fn sqrt_pauli(p: Pauli, positive: bool) -> Mat2 {
    let s = if positive { 1.0 } else { -1.0 };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let m = pauli_matrix(p);
    let id = pauli_matrix(Pauli::I);
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (id[i][j] + Complex64::new(0.0, s) * m[i][j]) * r;
        }
    }
    out
}

fn conjugate_numeric(m: &Mat2, p: Pauli) -> Option<SignedPauli> {
    let c = mat_mul(&mat_mul(m, &pauli_matrix(p)), &mat_adjoint(m));
    for q in [Pauli::X, Pauli::Y, Pauli::Z] {
        let pm = pauli_matrix(q);
        if mat_close(&c, &pm) {
            return Some(SignedPauli::plus(q));
        }
        if mat_close(&c, &mat_scale(&pm, Complex64::new(-1.0, 0.0))) {
            return Some(SignedPauli::minus(q));
        }
    }
    None
}

struct Tables {
    matrices: Vec<Mat2>,
    names: Vec<String>,
    images: Vec<(SignedPauli, SignedPauli)>,
    by_images: HashMap<(SignedPauli, SignedPauli), u8>,
    compose: [[u8; 24]; 24],
    compose_phase: [[u8; 24]; 24],
    inverse: [u8; 24],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

fn build_tables() -> Tables {
    let gens = [('H', hadamard_matrix()), ('S', s_matrix())];
    let mut matrices = vec![pauli_matrix(Pauli::I)];
    let mut names = vec!["I".to_string()];
    let mut images = vec![(SignedPauli::plus(Pauli::X), SignedPauli::plus(Pauli::Z))];
    let mut by_images = HashMap::new();
    by_images.insert(images[0], 0u8);

    let mut head = 0;
    while head < matrices.len() {
        for (letter, g) in &gens {
            let m = mat_mul(&matrices[head], g);
            let img = (
                conjugate_numeric(&m, Pauli::X).expect("Clifford"),
                conjugate_numeric(&m, Pauli::Z).expect("Clifford"),
            );
            if !by_images.contains_key(&img) {
                let name = if head == 0 {
                    letter.to_string()
                } else {
                    format!("{}{}", names[head], letter)
                };
                by_images.insert(img, matrices.len() as u8);
                matrices.push(m);
                names.push(name);
                images.push(img);
            }
        }
        head += 1;
    }
    assert_eq!(matrices.len(), 24);
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        let m = pauli_matrix(p);
        let img = (
            conjugate_numeric(&m, Pauli::X).expect("Clifford"),
            conjugate_numeric(&m, Pauli::Z).expect("Clifford"),
        );
        names[by_images[&img] as usize] = p.to_char().to_string();
    }

    let find = |m: &Mat2| -> (u8, u8) {
        let img = (
            conjugate_numeric(m, Pauli::X).expect("Clifford"),
            conjugate_numeric(m, Pauli::Z).expect("Clifford"),
        );
        let idx = by_images[&img];
        let k = (0..8u8)
            .find(|&k| mat_close(m, &mat_scale(&matrices[idx as usize], omega(k))))
            .expect("phase is a power of omega");
        (idx, k)
    };

    let mut compose = [[0u8; 24]; 24];
    let mut compose_phase = [[0u8; 24]; 24];
    let mut inverse = [0u8; 24];
    for a in 0..24 {
        for b in 0..24 {
            let (idx, k) = find(&mat_mul(&matrices[a], &matrices[b]));
            compose[a][b] = idx;
            compose_phase[a][b] = k;
        }
        inverse[a] = find(&mat_adjoint(&matrices[a])).0;
    }

    Tables {
        matrices,
        names,
        images,
        by_images,
        compose,
        compose_phase,
        inverse,
    }
}

/// A single-qubit Clifford modulo global phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClifford(u8);

impl LocalClifford {
    pub const ORDER: usize = 24;

    pub fn identity() -> Self {
        LocalClifford(0)
    }

    pub fn hadamard() -> Self {
        Self::from_name("H").expect("H")
    }

    pub fn phase() -> Self {
        Self::from_name("S").expect("S")
    }

    pub fn pauli(p: Pauli) -> Self {
        Self::from_matrix(&pauli_matrix(p)).expect("Pauli").0
    }

    pub fn all() -> impl Iterator<Item = LocalClifford> {
        (0..24u8).map(LocalClifford)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < 24).then_some(LocalClifford(i as u8))
    }

    /// The element sending `X ↦ x_image`, `Z ↦ z_image`, if those anticommute.
    pub fn from_images(x_image: SignedPauli, z_image: SignedPauli) -> Option<Self> {
        tables()
            .by_images
            .get(&(x_image, z_image))
            .map(|&i| LocalClifford(i))
    }

    /// Identifies `m` as `ω^k` times a canonical Clifford matrix.
    pub fn from_matrix(m: &Mat2) -> Option<(Self, u8)> {
        let img = (conjugate_numeric(m, Pauli::X)?, conjugate_numeric(m, Pauli::Z)?);
        let c = Self::from_images(img.0, img.1)?;
        let k = (0..8u8).find(|&k| mat_close(m, &mat_scale(&c.matrix(), omega(k))))?;
        Some((c, k))
    }

    /// `X`, `Y`, `Z`, or the shortest word in `H` and `S` otherwise.
    pub fn from_name(name: &str) -> Option<Self> {
        tables()
            .names
            .iter()
            .position(|n| n == name)
            .map(|i| LocalClifford(i as u8))
    }

    pub fn name(self) -> &'static str {
        &tables().names[self.index()]
    }

    pub fn matrix(self) -> Mat2 {
        tables().matrices[self.index()]
    }

    /// `C P C†`.
    pub fn conjugate(self, p: Pauli) -> SignedPauli {
        let (ix, iz) = tables().images[self.index()];
        match p {
            Pauli::I => SignedPauli::plus(Pauli::I),
            Pauli::X => ix,
            Pauli::Z => iz,
            Pauli::Y => {
                // Y = iXZ
                let (k, r) = ix.pauli.mul(iz.pauli);
                let k = (k + 1) % 4;
                debug_assert!(k == 0 || k == 2);
                SignedPauli {
                    negative: (k == 2) ^ ix.negative ^ iz.negative,
                    pauli: r,
                }
            }
        }
    }

    pub fn conjugate_signed(self, p: SignedPauli) -> SignedPauli {
        let mut out = self.conjugate(p.pauli);
        out.negative ^= p.negative;
        out
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(self, rhs: LocalClifford) -> LocalClifford {
        LocalClifford(tables().compose[self.index()][rhs.index()])
    }

    /// `M(self)·M(rhs) = ω^k M(self·rhs)`; returns `(self·rhs, k)`.
    pub fn compose_with_phase(self, rhs: LocalClifford) -> (LocalClifford, u8) {
        let t = tables();
        (
            LocalClifford(t.compose[self.index()][rhs.index()]),
            t.compose_phase[self.index()][rhs.index()],
        )
    }

    pub fn inverse(self) -> LocalClifford {
        LocalClifford(tables().inverse[self.index()])
    }

    /// The Pauli this element equals (up to phase), if it is one.
    pub fn as_pauli(self) -> Option<Pauli> {
        let x = self.conjugate(Pauli::X);
        let z = self.conjugate(Pauli::Z);
        (x.pauli == Pauli::X && z.pauli == Pauli::Z).then(|| Pauli::from_bits(z.negative, x.negative))
    }
}

impl Default for LocalClifford {
    fn default() -> Self {
        LocalClifford::identity()
    }
}

impl fmt::Debug for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalClifford({})", self.name())
    }
}

impl fmt::Display for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for LocalClifford {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for LocalClifford {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        LocalClifford::from_name(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown Clifford name '{name}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_four_distinct_elements() {
        let mut seen = std::collections::HashSet::new();
        for c in LocalClifford::all() {
            let img = (c.conjugate(Pauli::X), c.conjugate(Pauli::Z));
            assert!(img.0.pauli != Pauli::I && img.1.pauli != Pauli::I);
            assert!(!img.0.pauli.commutes_with(img.1.pauli));
            assert!(seen.insert(img));
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn composition_matches_matrices() {
        for a in LocalClifford::all() {
            for b in LocalClifford::all() {
                let (c, k) = a.compose_with_phase(b);
                let lhs = mat_mul(&a.matrix(), &b.matrix());
                assert!(mat_close(&lhs, &mat_scale(&c.matrix(), omega(k))));
                for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                    assert_eq!(c.conjugate(p), a.conjugate_signed(b.conjugate(p)));
                }
            }
            assert_eq!(a.compose(a.inverse()), LocalClifford::identity());
        }
    }

    #[test]
    fn y_image_matches_numeric_conjugation() {
        for c in LocalClifford::all() {
            assert_eq!(Some(c.conjugate(Pauli::Y)), conjugate_numeric(&c.matrix(), Pauli::Y));
        }
    }

    #[test]
    fn names_roundtrip_and_basics() {
        for c in LocalClifford::all() {
            assert_eq!(LocalClifford::from_name(c.name()), Some(c));
        }
        assert_eq!(LocalClifford::identity().name(), "I");
        assert_eq!(LocalClifford::from_name("Z"), Some(LocalClifford::pauli(Pauli::Z)));
        assert_eq!(LocalClifford::from_name("X"), Some(LocalClifford::pauli(Pauli::X)));
        assert_eq!(LocalClifford::pauli(Pauli::Y).name(), "Y");
        let h = LocalClifford::hadamard();
        assert_eq!(h.conjugate(Pauli::X), SignedPauli::plus(Pauli::Z));
        assert_eq!(LocalClifford::pauli(Pauli::Z).as_pauli(), Some(Pauli::Z));
        assert_eq!(LocalClifford::pauli(Pauli::Y).as_pauli(), Some(Pauli::Y));
        assert_eq!(h.as_pauli(), None);
    }

    #[test]
    fn square_roots_are_clifford() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            for pos in [true, false] {
                assert!(LocalClifford::from_matrix(&sqrt_pauli(p, pos)).is_some());
            }
        }
    }
}
