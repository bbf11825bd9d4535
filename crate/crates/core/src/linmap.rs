//! GF(2)-linear maps between packed bit vectors, applied through byte
//! lookup tables.

#[derive(Clone, Debug)]
pub struct LinearMap {
    tables: Vec<[u64; 256]>,
}

impl LinearMap {
    /// `images[j]` is the image of the input bit `j`.
    pub fn from_images(images: &[u64]) -> Self {
        let tables = images
            .chunks(8)
            .map(|chunk| {
                let mut t = [0u64; 256];
                for v in 1..256usize {
                    let j = v.trailing_zeros() as usize;
                    t[v] = t[v & (v - 1)] ^ chunk.get(j).copied().unwrap_or(0);
                }
                t
            })
            .collect();
        LinearMap { tables }
    }

    pub fn input_bits(&self) -> usize {
        self.tables.len() * 8
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for (i, t) in self.tables.iter().enumerate() {
            acc ^= t[(x >> (8 * i)) as usize & 0xff];
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn applies_linear_combinations() {
        let images: Vec<u64> = (0..20).map(|j| (j * 0x9e37_79b9u64) ^ (1 << j)).collect();
        let map = LinearMap::from_images(&images);
        for x in [0u64, 1, 0b1011, 0xfffff, 0x5a5a5] {
            let expect = (0..20)
                .filter(|j| x >> j & 1 == 1)
                .fold(0, |acc, j| acc ^ images[j]);
            assert_eq!(map.apply(x), expect);
        }
    }
}
