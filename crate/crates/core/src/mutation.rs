//! New UOMs from old ones by exchanging a 2x2 cross block
//!
//! ```text
//! a c        c a
//! c a   ->   a c
//! ```
//!
//! in rows `r1, r2` and columns `j1, j2`, when `a` and `c` each occur once
//! in both columns and their partners sit in the same rows of both columns.

use serde::{Deserialize, Serialize};

use crate::error::{Result, UomError};
use crate::matrix::{partner, Label, Uom};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SwapSite {
    pub r1: usize,
    pub r2: usize,
    pub j1: usize,
    pub j2: usize,
    /// `u[r1][j1] = u[r2][j2] = a`.
    pub a: Label,
    /// `u[r1][j2] = u[r2][j1] = c`.
    pub c: Label,
}

impl SwapSite {
    /// The same block seen from its other diagonal.
    pub fn mirrored(self) -> SwapSite {
        SwapSite {
            a: self.c,
            c: self.a,
            ..self
        }
    }
}

impl std::fmt::Display for SwapSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "rows {},{} columns {},{} labels {},{}",
            self.r1 + 1,
            self.r2 + 1,
            self.j1 + 1,
            self.j2 + 1,
            self.a,
            self.c
        )
    }
}

fn rows_with(u: &Uom, col: usize, v: Label) -> u128 {
    u.label_mask(col, v)
}

/// Checks a site against `u` as given (no renaming).
pub fn is_swap_site(u: &Uom, s: &SwapSite) -> bool {
    let (m, n) = u.shape();
    if s.r1 >= m || s.r2 >= m || s.j1 >= n || s.j2 >= n || s.r1 == s.r2 || s.j1 == s.j2 {
        return false;
    }
    let (a, c) = (s.a, s.c);
    if a == c || a == partner(c) {
        return false;
    }
    let block = [
        u.get(s.r1, s.j1),
        u.get(s.r1, s.j2),
        u.get(s.r2, s.j1),
        u.get(s.r2, s.j2),
    ];
    if block != [a, c, c, a] {
        return false;
    }
    let once = |j, v| u.multiplicity(j, v) == 1;
    once(s.j1, a)
        && once(s.j2, a)
        && once(s.j1, c)
        && once(s.j2, c)
        && rows_with(u, s.j1, partner(a)) == rows_with(u, s.j2, partner(a))
        && rows_with(u, s.j1, partner(c)) == rows_with(u, s.j2, partner(c))
}

/// Every site of `u`, read on its top-down renamed labels, with
/// `r1 < r2` and `j1 < j2`.
pub fn find_swap_sites(u: &Uom) -> Vec<SwapSite> {
    let u = u.rename_canonical();
    let (m, n) = u.shape();
    let mut out = Vec::new();
    for j1 in 0..n {
        for j2 in j1 + 1..n {
            for r1 in 0..m {
                for r2 in r1 + 1..m {
                    let s = SwapSite {
                        r1,
                        r2,
                        j1,
                        j2,
                        a: u.get(r1, j1),
                        c: u.get(r1, j2),
                    };
                    if is_swap_site(&u, &s) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Exchanges the block of the renamed matrix and renames the result.
/// `site` is read against `u.rename_canonical()`, as returned by
/// [`find_swap_sites`].
pub fn apply_swap(u: &Uom, site: &SwapSite) -> Result<Uom> {
    let mut out = u.rename_canonical();
    if !is_swap_site(&out, site) {
        return Err(UomError::InvalidSwapSite(site.to_string()));
    }
    out.set(site.r1, site.j1, site.c);
    out.set(site.r1, site.j2, site.a);
    out.set(site.r2, site.j1, site.a);
    out.set(site.r2, site.j2, site.c);
    Ok(out.rename_canonical())
}
