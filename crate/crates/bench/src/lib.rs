//! Fixtures shared by the criterion benchmarks in `benches/`.

use std::sync::Arc;

use sztwist::cobar::{words_up_to, CobarWord};
use sztwist::{models, Presentation, Simplex, TwistingFunction};

/// Loop-group twist on the collapsed n-simplex, truncated just high enough for t on the top cell.
pub fn collapsed_twist(n: usize) -> Arc<TwistingFunction> {
    models::loop_twist(models::collapsed_simplex(n, 0), n + 1)
}

/// The unique top cell of the collapsed n-simplex.
pub fn top_cell(x: &Presentation, n: usize) -> Simplex {
    x.nondegenerate(n)[0]
}

/// Cobar words of degree at most `deg` with at most `len` letters on the 1-reduced collapsed n-simplex.
pub fn cobar_words(n: usize, deg: i64, len: usize) -> (Presentation, Vec<CobarWord>) {
    let x = models::collapsed_simplex(n, 1);
    let ws = words_up_to(&x, deg, len);
    (x, ws)
}
