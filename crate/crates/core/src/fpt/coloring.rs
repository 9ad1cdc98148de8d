use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FptConfig, FptError, FptMode};
use crate::model::Symbol;

/// Assignment of one of `k` colors to every vertex. Colors are stored
/// 0-based: color `c_i` is index `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<u16>,
    k: usize,
}

impl Coloring {
    pub fn new(colors: Vec<u16>, k: usize) -> Result<Self, FptError> {
        if k == 0 || k > u16::MAX as usize {
            return Err(FptError::BadColorCount(k));
        }
        if let Some(&c) = colors.iter().find(|&&c| c as usize >= k) {
            return Err(FptError::ColorOutOfRange { color: c as usize, k });
        }
        Ok(Coloring { colors, k })
    }

    /// Every vertex gets color `c_1`.
    pub fn uniform(vertex_count: usize) -> Self {
        Coloring {
            colors: vec![0; vertex_count],
            k: 1,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v] as usize
    }

    pub fn colors(&self) -> &[u16] {
        &self.colors
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    /// True when the given vertices receive pairwise distinct colors.
    pub fn is_colorful_on(&self, vertices: &[usize]) -> bool {
        let mut seen = vec![false; self.k];
        vertices
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[self.color(v)], true))
    }
}

/// The color-to-symbol map `r`: vertices colored `c` must match query
/// positions holding `r(c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RFunction {
    symbols: Vec<Symbol>,
}

impl RFunction {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        RFunction { symbols }
    }

    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, color: usize) -> Symbol {
        self.symbols[color]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }
}

/// ⌈e^k · ln(1/δ)⌉ uniform colorings make any fixed k-set colorful with
/// probability at least 1 − δ, since a single coloring does so with
/// probability k!/k^k ≥ e^−k.
pub fn randomized_family_size(k: usize, delta: f64) -> u64 {
    ((k as f64).exp() * (1.0 / delta).ln()).ceil() as u64
}

/// Number of colorings [`build_coloring_family`] yields.
pub fn family_size(vertex_count: usize, k: usize, config: &FptConfig) -> u128 {
    match config.mode {
        FptMode::Deterministic => (k as u128).checked_pow(vertex_count as u32).unwrap_or(u128::MAX),
        FptMode::Randomized => randomized_family_size(k, config.delta) as u128,
    }
}

/// A coloring family over `vertex_count` vertices with `k` colors.
///
/// Deterministic mode enumerates all `k^|V|` colorings, which is trivially
/// perfect, and refuses when that exceeds `config.exhaustive_limit`.
/// Randomized mode draws [`randomized_family_size`] uniform colorings from
/// a stream keyed by `(seed, k)`.
pub fn build_coloring_family(vertex_count: usize, k: usize, config: &FptConfig) -> Result<ColoringFamily, FptError> {
    if k == 0 || k > u16::MAX as usize {
        return Err(FptError::BadColorCount(k));
    }
    match config.mode {
        FptMode::Deterministic => {
            let size = family_size(vertex_count, k, config);
            if size > config.exhaustive_limit {
                return Err(FptError::BeyondExhaustiveBound {
                    colorings: size,
                    limit: config.exhaustive_limit,
                });
            }
            Ok(ColoringFamily::Exhaustive {
                next: Some(vec![0; vertex_count]),
                k,
            })
        }
        FptMode::Randomized => Ok(ColoringFamily::Random {
            rng: Box::new(seeded_stream(config.seed, k)),
            remaining: randomized_family_size(k, config.delta),
            vertex_count,
            k,
        }),
    }
}

pub(crate) fn seeded_stream(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

pub enum ColoringFamily {
    Exhaustive { next: Option<Vec<u16>>, k: usize },
    Random { rng: Box<ChaCha8Rng>, remaining: u64, vertex_count: usize, k: usize },
}

impl Iterator for ColoringFamily {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        match self {
            ColoringFamily::Exhaustive { next, k } => {
                let current = next.take()?;
                let mut succ = current.clone();
                // odometer, last vertex fastest
                let mut advanced = false;
                for digit in succ.iter_mut().rev() {
                    if (*digit as usize) + 1 < *k {
                        *digit += 1;
                        advanced = true;
                        break;
                    }
                    *digit = 0;
                }
                if advanced {
                    *next = Some(succ);
                }
                Some(Coloring { colors: current, k: *k })
            }
            ColoringFamily::Random {
                rng,
                remaining,
                vertex_count,
                k,
            } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let colors = (0..*vertex_count).map(|_| rng.gen_range(0..*k as u16)).collect();
                Some(Coloring { colors, k: *k })
            }
        }
    }
}

/// Colorings using exactly `k` colors, one per class of color relabelling:
/// the restricted-growth strings (first occurrences of colors appear in
/// increasing order). Every k-subset that some k-coloring makes colorful is
/// made colorful by one of these.
pub fn canonical_colorings(vertex_count: usize, k: usize) -> CanonicalColorings {
    let start = if k == 0 || k > vertex_count {
        None
    } else {
        // smallest restricted-growth string that uses all k colors
        let mut first = vec![0u16; vertex_count];
        for (i, slot) in first.iter_mut().rev().take(k - 1).enumerate() {
            *slot = (k - 1 - i) as u16;
        }
        Some(first)
    };
    CanonicalColorings { next: start, k }
}

/// How many colorings [`canonical_colorings`] yields: the Stirling number
/// S(n, k) of the second kind (saturating).
pub fn canonical_count(vertex_count: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..vertex_count {
        for j in (1..=k).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

pub struct CanonicalColorings {
    next: Option<Vec<u16>>,
    k: usize,
}

impl CanonicalColorings {
    fn advance(current: &[u16], k: usize) -> Option<Vec<u16>> {
        let n = current.len();
        // prefix maxima
        let mut prefix_max = vec![0u16; n];
        let mut m = 0;
        for i in 0..n {
            prefix_max[i] = m;
            m = m.max(current[i]);
        }
        for i in (1..n).rev() {
            // position i may take any value up to prefix_max[i] + 1
            let cap = (prefix_max[i] as usize + 1).min(k - 1) as u16;
            if current[i] < cap {
                let mut succ = current[..=i].to_vec();
                succ[i] += 1;
                let used = succ.iter().copied().max().unwrap_or(0) as usize + 1;
                let tail = n - i - 1;
                let missing = k - used;
                if missing > tail {
                    continue;
                }
                // fill the tail with zeros, then the missing colors at the end
                succ.extend(std::iter::repeat_n(0, tail - missing));
                succ.extend((used..k).map(|c| c as u16));
                return Some(succ);
            }
        }
        None
    }
}

impl Iterator for CanonicalColorings {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        let current = self.next.take()?;
        self.next = Self::advance(&current, self.k);
        Some(Coloring { colors: current, k: self.k })
    }
}
