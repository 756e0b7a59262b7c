use super::design::{dist, Design};
use super::NamedFeatures;
use crate::error::{Error, Result};
use crate::rng::{pick_index, stream};

/// Entropy level below which the landscape counts as settled.
pub const IC_SETTLING: f64 = 0.05;

/// Sensitivity grid: 0 followed by 10^(-5 + 0.05 s) for s = 0..=400.
pub fn epsilon_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..=400).map(|s| 10f64.powf(-5.0 + 0.05 * s as f64)))
        .collect()
}

/// Visiting order starting from a seeded random point, always moving to the
/// closest unvisited point (ties go to the lowest index).
pub fn nearest_neighbour_tour(design: &Design, seed: u64) -> Vec<usize> {
    let n = design.len();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = stream(seed);
    let mut current = pick_index(&mut rng, n);
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    loop {
        visited[current] = true;
        tour.push(current);
        let mut next = None;
        let mut best = f64::INFINITY;
        for j in 0..n {
            if !visited[j] {
                let d = dist(&design.points[current], &design.points[j]);
                if d < best {
                    best = d;
                    next = Some(j);
                }
            }
        }
        match next {
            Some(j) => current = j,
            None => break,
        }
    }
    tour
}

fn symbols(slopes: &[f64], eps: f64) -> Vec<i8> {
    slopes
        .iter()
        .map(|&s| {
            if s > eps {
                1
            } else if s < -eps {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Entropy of consecutive unequal symbol pairs, base 6.
pub fn entropy(symbols: &[i8]) -> f64 {
    if symbols.len() < 2 {
        return 0.0;
    }
    let mut counts = [[0usize; 3]; 3];
    for w in symbols.windows(2) {
        counts[(w[0] + 1) as usize][(w[1] + 1) as usize] += 1;
    }
    let total = (symbols.len() - 1) as f64;
    let mut h = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            if a != b && counts[a][b] > 0 {
                let p = counts[a][b] as f64 / total;
                h -= p * p.log(6.0);
            }
        }
    }
    h
}

/// Partial information: sign changes between consecutive nonzero symbols,
/// relative to the string length.
pub fn partial_information(symbols: &[i8]) -> f64 {
    if symbols.is_empty() {
        return 0.0;
    }
    let mut last = 0i8;
    let mut changes = 0usize;
    for &s in symbols.iter().filter(|&&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes as f64 / symbols.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcFeatures {
    pub h_max: f64,
    pub eps_s: f64,
    pub eps_max: f64,
    pub eps_ratio: f64,
    pub m0: f64,
}

/// Information-content summary of a walk with fitness `values` and step
/// lengths `steps` (`steps.len() == values.len() - 1`).
pub fn ic_from_sequence(values: &[f64], steps: &[f64]) -> Result<IcFeatures> {
    if values.len() < 3 {
        return Err(Error::Domain(format!(
            "information content needs at least 3 points, got {}",
            values.len()
        )));
    }
    assert_eq!(steps.len() + 1, values.len(), "one step per consecutive pair");
    let slopes: Vec<f64> = values
        .windows(2)
        .zip(steps)
        .map(|(w, &d)| if d > 0.0 { (w[1] - w[0]) / d } else { 0.0 })
        .collect();
    let fallback = slopes.iter().fold(0.0, |m, s| f64::max(m, s.abs()));
    let m0 = partial_information(&symbols(&slopes, 0.0));
    let mut h_max = f64::NEG_INFINITY;
    let mut eps_max = 0.0;
    let mut eps_s = None;
    let mut eps_ratio = None;
    for eps in epsilon_grid() {
        let sym = symbols(&slopes, eps);
        let h = entropy(&sym);
        if h > h_max {
            h_max = h;
            eps_max = eps;
        }
        if eps_s.is_none() && h < IC_SETTLING {
            eps_s = Some(eps);
        }
        if eps_ratio.is_none() && partial_information(&sym) <= 0.5 * m0 {
            eps_ratio = Some(eps);
        }
    }
    Ok(IcFeatures {
        h_max,
        eps_s: eps_s.unwrap_or(fallback),
        eps_max,
        eps_ratio: eps_ratio.unwrap_or(fallback),
        m0,
    })
}

pub fn ic_features(design: &Design, seed: u64) -> Result<NamedFeatures> {
    if design.len() < 3 {
        return Err(Error::Domain(format!(
            "information content needs at least 3 points, got {}",
            design.len()
        )));
    }
    let tour = nearest_neighbour_tour(design, seed);
    let values: Vec<f64> = tour.iter().map(|&i| design.values[i]).collect();
    let steps: Vec<f64> = tour
        .windows(2)
        .map(|w| dist(&design.points[w[0]], &design.points[w[1]]))
        .collect();
    let f = ic_from_sequence(&values, &steps)?;
    Ok(vec![
        ("ic.h.max".into(), f.h_max),
        ("ic.eps.s".into(), f.eps_s),
        ("ic.eps.max".into(), f.eps_max),
        ("ic.eps.ratio".into(), f.eps_ratio),
        ("ic.m0".into(), f.m0),
    ])
}
