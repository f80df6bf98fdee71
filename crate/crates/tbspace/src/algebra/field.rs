//! Small binary fields F_{2^m} with log/antilog tables relative to a chosen
//! primitive element. Elements are bit patterns of polynomial residues.

use super::AlgebraError;

/// Polynomial multiplication of `a * b` modulo `poly` (degree `m`) over GF(2).
pub(crate) fn polymul_mod(a: u32, b: u32, poly: u32, m: u32) -> u16 {
    let mut acc: u32 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= poly;
        }
    }
    acc as u16
}

/// Remainder of polynomial division a mod g over GF(2).
fn poly_rem(mut a: u64, g: u64) -> u64 {
    let dg = 63 - g.leading_zeros() as i32;
    loop {
        let da = 63 - a.leading_zeros() as i32;
        if a == 0 || da < dg {
            return a;
        }
        a ^= g << (da - dg);
    }
}

fn poly_is_irreducible(poly: u32, m: u32) -> bool {
    if poly >> m != 1 {
        return false;
    }
    for d in 1..=m / 2 {
        for g in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(poly as u64, g) == 0 {
                return false;
            }
        }
    }
    true
}

/// Deterministic Miller-Rabin for u64 inputs.
pub fn miller_rabin_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A binary field F_{2^m} given by an irreducible polynomial and a chosen
/// primitive element (a generator of the multiplicative group). Log tables
/// are taken relative to that element.
#[derive(Clone)]
pub struct FieldSpec {
    m: u32,
    poly: u32,
    primitive: u16,
    /// exp[i] = primitive^i, i in 0..q-1
    exp: Vec<u16>,
    /// log[x] for x != 0, in 0..q-1 (log[1] = 0)
    log: Vec<u16>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FieldSpec(m={}, poly={:#x}, primitive={:#x})",
            self.m, self.poly, self.primitive
        )
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly && self.primitive == other.primitive
    }
}
impl Eq for FieldSpec {}

impl FieldSpec {
    pub fn new(m: u32, poly: u32, primitive: u16) -> Result<Self, AlgebraError> {
        if !(1..=16).contains(&m) {
            return Err(AlgebraError::BadDegree {
                poly,
                expected: m,
                actual: 32 - poly.leading_zeros() - 1,
            });
        }
        if poly >> m != 1 {
            return Err(AlgebraError::BadDegree {
                poly,
                expected: m,
                actual: 31u32.saturating_sub(poly.leading_zeros()),
            });
        }
        if !poly_is_irreducible(poly, m) {
            return Err(AlgebraError::ReduciblePolynomial { poly });
        }
        let q = 1usize << m;
        if primitive == 0 || primitive as usize >= q {
            return Err(AlgebraError::NotPrimitive { elem: primitive, poly });
        }
        let mut exp = vec![0u16; q - 1];
        let mut log = vec![0u16; q];
        exp[0] = 1;
        let mut cur: u16 = 1;
        for i in 1..q - 1 {
            cur = polymul_mod(cur as u32, primitive as u32, poly, m);
            if cur == 1 {
                // order < q-1
                return Err(AlgebraError::NotPrimitive { elem: primitive, poly });
            }
            exp[i] = cur;
        }
        if polymul_mod(cur as u32, primitive as u32, poly, m) != 1 {
            return Err(AlgebraError::NotPrimitive { elem: primitive, poly });
        }
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u16;
        }
        Ok(FieldSpec {
            m,
            poly,
            primitive,
            exp,
            log,
        })
    }

    /// GF(4) = F_2[x]/(x^2+x+1), primitive x.
    pub fn gf4() -> FieldSpec {
        FieldSpec::new(2, 0b111, 0b10).unwrap()
    }

    /// GF(16) = F_2[x]/(x^4+x+1), primitive x (the PRESENT brick field).
    pub fn gf16() -> FieldSpec {
        FieldSpec::new(4, 0b10011, 0b10).unwrap()
    }

    /// GF(256) in the AES representation F_2[x]/(x^8+x^4+x^3+x+1) with the
    /// standard primitive element 0x03.
    pub fn gf256_aes() -> FieldSpec {
        FieldSpec::new(8, 0x11B, 0x03).unwrap()
    }

    /// GF(256) in the AES representation, log tables relative to the root
    /// of the primitive polynomial x^8+x^4+x^3+x^2+1 living inside it: the
    /// unique such root gamma = 0xFB with gamma^2 = 0x03. This is the
    /// element the embedding indexes powers by.
    pub fn gf256_aes_embedding() -> FieldSpec {
        FieldSpec::new(8, 0x11B, 0xFB).unwrap()
    }

    /// GF(256) = F_2[x]/(x^8+x^4+x^3+x^2+1), primitive x.
    pub fn gf256_11d() -> FieldSpec {
        FieldSpec::new(8, 0x11D, 0x02).unwrap()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn primitive(&self) -> u16 {
        self.primitive
    }

    /// Field size 2^m.
    pub fn order(&self) -> usize {
        1 << self.m
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let q1 = self.order() - 1;
        let s = (self.log[a as usize] as usize + self.log[b as usize] as usize) % q1;
        self.exp[s]
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let q1 = (self.order() - 1) as u64;
        let s = (self.log[a as usize] as u64 * (e % q1)) % q1;
        self.exp[s as usize]
    }

    /// Inverse patched with 0 -> 0 (the AES S-box core map).
    pub fn inv_patched(&self, a: u16) -> u16 {
        if a == 0 {
            return 0;
        }
        let q1 = self.order() - 1;
        self.exp[(q1 - self.log[a as usize] as usize) % q1]
    }

    /// Discrete log base the primitive element, in 0..2^m-1 (dlog(1) = 0).
    pub fn dlog(&self, a: u16) -> Result<u32, AlgebraError> {
        if a == 0 {
            return Err(AlgebraError::DlogOfZero);
        }
        Ok(self.log[a as usize] as u32)
    }

    /// primitive^e
    pub fn exp_of(&self, e: u32) -> u16 {
        self.exp[e as usize % (self.order() - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_arithmetic() {
        // hand oracle: alpha^2 = alpha + 1 in GF(4)
        let f = FieldSpec::gf4();
        let alpha = 0b10;
        assert_eq!(f.mul(alpha, alpha), 0b11);
        assert_eq!(f.mul(alpha, 0b11), 1);
        assert_eq!(f.inv_patched(alpha), 0b11);
        assert_eq!(f.inv_patched(0), 0);
        assert_eq!(f.dlog(0b11).unwrap(), 2);
    }

    #[test]
    fn dlog_of_generator_is_one() {
        let f = FieldSpec::gf256_11d();
        assert_eq!(f.dlog(0x02).unwrap(), 1);
        assert!(matches!(f.dlog(0), Err(AlgebraError::DlogOfZero)));
    }

    #[test]
    fn aes_embedding_primitive_element() {
        // gamma = 0xFB is a root of x^8+x^4+x^3+x^2+1 inside the AES
        // representation, and gamma^2 = 0x03.
        let f = FieldSpec::gf256_aes_embedding();
        let gamma = 0xFB;
        // evaluate n(gamma) = gamma^8 + gamma^4 + gamma^3 + gamma^2 + 1
        let n_val = f.pow(gamma, 8) ^ f.pow(gamma, 4) ^ f.pow(gamma, 3) ^ f.pow(gamma, 2) ^ 1;
        assert_eq!(n_val, 0);
        assert_eq!(f.mul(gamma, gamma), 0x03);
        // the dlog pattern behind the mixing counterexample:
        // 3*gamma = gamma^3 and 2*gamma = gamma^51
        assert_eq!(f.dlog(0x03).unwrap(), 2);
        assert_eq!(f.dlog(0x02).unwrap(), 50);
        assert_eq!(f.dlog(f.mul(0x03, gamma)).unwrap(), 3);
        assert_eq!(f.dlog(f.mul(0x02, gamma)).unwrap(), 51);
    }

    #[test]
    fn rejects_reducible_polynomial() {
        // x^4 + 1 = (x+1)^4
        assert!(matches!(
            FieldSpec::new(4, 0b10001, 2),
            Err(AlgebraError::ReduciblePolynomial { .. })
        ));
    }

    #[test]
    fn rejects_non_primitive_element() {
        // in GF(16)/0x13, element x^5 = 0b0110 has order 3
        assert!(matches!(
            FieldSpec::new(4, 0b10011, 0b0110),
            Err(AlgebraError::NotPrimitive { .. })
        ));
        // 0x11D is primitive so x generates; x in 0x11B (AES) is NOT primitive
        assert!(FieldSpec::new(8, 0x11B, 0x02).is_err());
        assert!(FieldSpec::new(8, 0x11B, 0x03).is_ok());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for f in [FieldSpec::gf4(), FieldSpec::gf16()] {
            let q = f.order() as u16;
            for a in 0..q {
                // x^(q-1) = 1 for x != 0
                if a != 0 {
                    assert_eq!(f.pow(a, (q - 1) as u64), 1);
                    assert_eq!(f.mul(a, f.inv_patched(a)), 1);
                }
                for b in 0..q {
                    // commutativity and table-vs-polynomial agreement
                    let t = f.mul(a, b);
                    assert_eq!(t, f.mul(b, a));
                    assert_eq!(t, polymul_mod(a as u32, b as u32, f.poly(), f.m()));
                    for c in 0..q {
                        // distributivity spot (full loop is cheap at m<=4)
                        assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn aes_field_tables_match_polynomial_mult() {
        let f = FieldSpec::gf256_aes();
        for a in 0..256u32 {
            for b in (0..256u32).step_by(7) {
                assert_eq!(
                    f.mul(a as u16, b as u16),
                    polymul_mod(a, b, 0x11B, 8),
                    "a={a:#x} b={b:#x}"
                );
            }
        }
    }

    #[test]
    fn miller_rabin_basics() {
        for p in [2u64, 3, 5, 127, 601, 1801, 228479, 48544121, 212885833] {
            assert!(miller_rabin_u64(p), "{p}");
        }
        for c in [1u64, 4, 221, 228481, 48544121 * 3, 3215031751] {
            assert!(!miller_rabin_u64(c), "{c}");
        }
    }
}
