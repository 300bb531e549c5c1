use num_integer::Integer;

/// Unit cells `[i, i+1] × [j, j+1]` whose closure meets the closed segment
/// from the origin to the integer point `end` (exact supercover).
pub fn supercover(end: (i64, i64)) -> Vec<(i64, i64)> {
    let (px, py) = (i128::from(end.0), i128::from(end.1));
    let (xmin, xmax) = (px.min(0), px.max(0));
    let mut cells = Vec::new();
    for i in (xmin - 1)..=xmax {
        let lo = i.max(xmin);
        let hi = (i + 1).min(xmax);
        if lo > hi {
            continue;
        }
        // ceil(min y) and floor(max y) of the segment over x ∈ [lo, hi]
        let (ymin_ceil, ymax_floor) = if px == 0 {
            (py.min(0), py.max(0))
        } else {
            let (at_lo, at_hi) = ((py * lo, px), (py * hi, px));
            let (low, high) = if py * px >= 0 { (at_lo, at_hi) } else { (at_hi, at_lo) };
            (Integer::div_ceil(&low.0, &low.1), Integer::div_floor(&high.0, &high.1))
        };
        for j in (ymin_ceil - 1)..=ymax_floor {
            cells.push((i as i64, j as i64));
        }
    }
    cells
}
