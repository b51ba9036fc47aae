use crate::error::{ensure_finite, ensure_len, Error, Result};

/// Interlaced prescribed breakpoints.
///
/// * `level1`: `x_1 < ... < x_{n1}`.
/// * `level2[j][ν]`: the zero of unit `j` in `(x_ν, x_{ν+1})`, `ν = 0..=n1`.
/// * `level3[r][j]`: the zero of third-layer unit `r` in `(x_{j,0}, x_{j+1,0})`,
///   `j = 0..=n2`, where the left end of `j = 0` is `-∞` and the right end of
///   `j = n2` is `x_1`.
///
/// Level-2 rows only have to sit in their interval; they need not be ordered
/// in `j` unless a third level is present, in which case the `ν = 0` column
/// must increase with `j`. Level-3 entries must increase with `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotHierarchy {
    level1: Vec<f64>,
    level2: Vec<Vec<f64>>,
    level3: Option<Vec<Vec<f64>>>,
}

impl KnotHierarchy {
    pub fn new(level1: Vec<f64>, level2: Vec<Vec<f64>>, level3: Option<Vec<Vec<f64>>>) -> Result<Self> {
        let h = KnotHierarchy {
            level1,
            level2,
            level3,
        };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        let n1 = self.level1.len();
        if n1 == 0 {
            return Err(Error::InvalidOption("level 1 must hold at least one knot".into()));
        }
        if self.level2.is_empty() {
            return Err(Error::InvalidOption("level 2 must hold at least one row".into()));
        }
        ensure_finite("level 1 knots", &self.level1)?;
        for row in &self.level2 {
            ensure_finite("level 2 knots", row)?;
            ensure_len("level 2 row", n1 + 1, row.len())?;
        }
        if let Some(l3) = &self.level3 {
            if l3.is_empty() {
                return Err(Error::InvalidOption("level 3, when given, must hold at least one row".into()));
            }
            for row in l3 {
                ensure_finite("level 3 knots", row)?;
                ensure_len("level 3 row", self.level2.len() + 1, row.len())?;
            }
        }

        let mut all = self.knots();
        all.sort_by(f64::total_cmp);
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateKnot(w[0]));
        }

        if let Some(w) = self.level1.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Interlacing(format!(
                "level 1 must be increasing, found {} before {}",
                w[0], w[1]
            )));
        }
        for (j, row) in self.level2.iter().enumerate() {
            for (nu, &x) in row.iter().enumerate() {
                let lo = if nu == 0 { f64::NEG_INFINITY } else { self.level1[nu - 1] };
                let hi = if nu == n1 { f64::INFINITY } else { self.level1[nu] };
                if !(lo < x && x < hi) {
                    return Err(Error::Interlacing(format!(
                        "level 2 knot {x} (unit {}, interval {nu}) is outside ({lo}, {hi})",
                        j + 1
                    )));
                }
            }
        }
        if let Some(l3) = &self.level3 {
            let col0: Vec<f64> = self.level2.iter().map(|r| r[0]).collect();
            if let Some(w) = col0.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Error::Interlacing(format!(
                    "with a third level the leftmost level 2 knots must increase, found {} before {}",
                    w[0], w[1]
                )));
            }
            let n2 = col0.len();
            for j in 0..=n2 {
                let lo = if j == 0 { f64::NEG_INFINITY } else { col0[j - 1] };
                let hi = if j == n2 { self.level1[0] } else { col0[j] };
                let mut prev = lo;
                for (r, row) in l3.iter().enumerate() {
                    let x = row[j];
                    if !(prev < x && x < hi) {
                        return Err(Error::Interlacing(format!(
                            "level 3 knot {x} (unit {}, interval {j}) breaks ({lo}, {hi}) ordering",
                            r + 1
                        )));
                    }
                    prev = x;
                }
            }
        }
        Ok(())
    }

    /// Arranges a flat list of distinct knots into levels 1 and 2.
    ///
    /// The sorted list is read as blocks of `n2` level-2 knots separated by
    /// single level-1 knots, i.e. `x_{1,0} .. x_{n2,0}, x_1, x_{1,1} .. x_{n2,1}, x_2, ...`.
    pub fn from_flat_two(knots: &[f64], n1: usize, n2: usize) -> Result<Self> {
        let sorted = prepare_flat(knots, (n1 + 1) * n2 + n1)?;
        let mut it = sorted.into_iter();
        let mut level1 = Vec::with_capacity(n1);
        let mut level2 = vec![vec![0.0; n1 + 1]; n2];
        for nu in 0..=n1 {
            for row in level2.iter_mut() {
                row[nu] = it.next().unwrap_or_default();
            }
            if nu < n1 {
                level1.push(it.next().unwrap_or_default());
            }
        }
        KnotHierarchy::new(level1, level2, None)
    }

    /// Arranges a flat list of distinct knots into three levels with every
    /// level-3 knot left of `x_1`.
    ///
    /// Reading the sorted list from the left: for `j = 0..=n2`, `n3` level-3
    /// knots followed by `x_{j+1,0}` (omitted after the last group); then
    /// `x_1`; then for `ν = 1..=n1`, `n2` level-2 knots followed by `x_{ν+1}`
    /// (omitted after the last group).
    pub fn from_flat_three(knots: &[f64], n1: usize, n2: usize, n3: usize) -> Result<Self> {
        let sorted = prepare_flat(knots, n1 * n2 + n2 * n3 + n1 + n2 + n3)?;
        let mut it = sorted.into_iter();
        let mut level1 = Vec::with_capacity(n1);
        let mut level2 = vec![vec![0.0; n1 + 1]; n2];
        let mut level3 = vec![vec![0.0; n2 + 1]; n3];
        for j in 0..=n2 {
            for row in level3.iter_mut() {
                row[j] = it.next().unwrap_or_default();
            }
            if j < n2 {
                level2[j][0] = it.next().unwrap_or_default();
            }
        }
        level1.push(it.next().unwrap_or_default());
        for nu in 1..=n1 {
            for row in level2.iter_mut() {
                row[nu] = it.next().unwrap_or_default();
            }
            if nu < n1 {
                level1.push(it.next().unwrap_or_default());
            }
        }
        KnotHierarchy::new(level1, level2, Some(level3))
    }

    pub fn level1(&self) -> &[f64] {
        &self.level1
    }

    pub fn level2(&self) -> &[Vec<f64>] {
        &self.level2
    }

    pub fn level3(&self) -> Option<&[Vec<f64>]> {
        self.level3.as_deref()
    }

    pub fn n1(&self) -> usize {
        self.level1.len()
    }

    pub fn n2(&self) -> usize {
        self.level2.len()
    }

    pub fn n3(&self) -> usize {
        self.level3.as_ref().map_or(0, Vec::len)
    }

    /// Every stored knot, level by level.
    pub fn knots(&self) -> Vec<f64> {
        let mut v = self.level1.clone();
        v.extend(self.level2.iter().flatten());
        if let Some(l3) = &self.level3 {
            v.extend(l3.iter().flatten());
        }
        v
    }

    /// Every stored knot, sorted.
    pub fn sorted_knots(&self) -> Vec<f64> {
        let mut v = self.knots();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Levels 1 and 2 sorted; the knots a two-hidden-layer construction realizes.
    pub fn lower_knots(&self) -> Vec<f64> {
        let mut v = self.level1.clone();
        v.extend(self.level2.iter().flatten());
        v.sort_by(f64::total_cmp);
        v
    }

    /// Drops level 3.
    pub fn two_level(&self) -> KnotHierarchy {
        KnotHierarchy {
            level1: self.level1.clone(),
            level2: self.level2.clone(),
            level3: None,
        }
    }
}

fn prepare_flat(knots: &[f64], expected: usize) -> Result<Vec<f64>> {
    ensure_finite("flat knot list", knots)?;
    ensure_len("flat knot list", expected, knots.len())?;
    let mut sorted = knots.to_vec();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateKnot(w[0]));
    }
    Ok(sorted)
}
