use super::OracleError;

/// `F_q` for a prime `q < 256` or a prime power `q <= 9`, by addition and
/// multiplication tables.
///
/// Element `e` encodes the polynomial `Σ e_i X^i` over `F_p` via its base-`p`
/// digits; `X` is a root of the first irreducible monic polynomial of degree
/// `log_p q` in lexicographic order. Elements `0..p` form the prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|p| q.is_multiple_of(*p))?;
    let mut r = q;
    let mut k = 0;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn digits(e: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k).map(|i| e / p.pow(i) % p).collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl Field {
    pub fn new(q: u32) -> Result<Self, OracleError> {
        let (p, k) = prime_power(q).ok_or(OracleError::UnsupportedField(q))?;
        if q > 255 || (k > 1 && q > 9) {
            return Err(OracleError::UnsupportedField(q));
        }
        // monic modulus X^k + Σ c_i X^i with no root in F_p; for k <= 3 that
        // is irreducibility
        let modulus: Vec<u32> = (0..p.pow(k))
            .map(|c| digits(c, p, k))
            .find(|c| {
                k == 1
                    || (0..p)
                        .all(|x| (x.pow(k) + (0..k).map(|i| c[i as usize] * x.pow(i)).sum::<u32>()) % p != 0)
            })
            .expect("an irreducible polynomial exists");
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u8;
                let mut prod = vec![0u32; (2 * k) as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for i in 0..k as usize {
                            let sub = c * modulus[i] % p;
                            prod[deg - k as usize + i] = (prod[deg - k as usize + i] + p - sub) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..k as usize], p) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).expect("additive inverse") as u8)
            .collect();
        Ok(Self { q, p, add, mul, neg })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, x: i64) -> u8 {
        x.rem_euclid(i64::from(self.p)) as u8
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }
}
