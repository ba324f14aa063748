//! Brute-force reference implementations over dense 0/1 matrices.

/// Object-object transition matrix of mass diffusion, built densely:
/// `w[α][β] = (1/k_β) Σ_i a_iα a_iβ / k_i`.
pub fn md_matrix(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.first().map_or(0, Vec::len);
    let ku: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let ko: Vec<f64> = (0..n).map(|c| a.iter().map(|r| r[c]).sum()).collect();
    let mut w = vec![vec![0.0; n]; n];
    for alpha in 0..n {
        for beta in 0..n {
            if ko[beta] == 0.0 {
                continue;
            }
            let mut s = 0.0;
            for (i, row) in a.iter().enumerate() {
                if ku[i] > 0.0 {
                    s += row[alpha] * row[beta] / ku[i];
                }
            }
            w[alpha][beta] = s / ko[beta];
        }
    }
    w
}

pub fn apply(w: &[Vec<f64>], f: &[f64]) -> Vec<f64> {
    w.iter().map(|row| row.iter().zip(f).map(|(x, y)| x * y).sum()).collect()
}

/// Dense HDH matrix `w = k_α^(λ−1) k_β^(−λ) Σ_i a_iα a_iβ / k_i`.
pub fn hdh_matrix(a: &[Vec<f64>], lambda: f64) -> Vec<Vec<f64>> {
    let n = a.first().map_or(0, Vec::len);
    let ku: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let ko: Vec<f64> = (0..n).map(|c| a.iter().map(|r| r[c]).sum()).collect();
    let mut w = vec![vec![0.0; n]; n];
    for alpha in 0..n {
        for beta in 0..n {
            if ko[alpha] == 0.0 || ko[beta] == 0.0 {
                continue;
            }
            let s: f64 = a
                .iter()
                .enumerate()
                .filter(|(i, _)| ku[*i] > 0.0)
                .map(|(i, row)| row[alpha] * row[beta] / ku[i])
                .sum();
            w[alpha][beta] = s / (ko[alpha].powf(1.0 - lambda) * ko[beta].powf(lambda));
        }
    }
    w
}

/// UCF by the double loop over users and objects.
pub fn ucf(a: &[Vec<f64>], target: usize) -> Vec<f64> {
    let n = a[0].len();
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let mut p = vec![0.0; n];
    for j in 0..a.len() {
        if j == target || k[j] == 0.0 || k[target] == 0.0 {
            continue;
        }
        let s: f64 = (0..n).map(|x| a[target][x] * a[j][x]).sum::<f64>() / (k[target] * k[j]).sqrt();
        for alpha in 0..n {
            p[alpha] += s * a[j][alpha];
        }
    }
    p
}

/// ICF by the double loop over object pairs.
pub fn icf(a: &[Vec<f64>], target: usize) -> Vec<f64> {
    let n = a[0].len();
    let k: Vec<f64> = (0..n).map(|c| a.iter().map(|r| r[c]).sum()).collect();
    let mut p = vec![0.0; n];
    for alpha in 0..n {
        for beta in 0..n {
            if k[alpha] == 0.0 || k[beta] == 0.0 {
                continue;
            }
            let s: f64 = a.iter().map(|r| r[alpha] * r[beta]).sum::<f64>() / (k[alpha] * k[beta]).sqrt();
            p[alpha] += s * a[target][beta];
        }
    }
    p
}

/// p(o,u) by a triple loop: groups of u, members of each group, objects of each member.
pub fn influence(a: &[Vec<f64>], m: &[Vec<f64>], u: usize, o: usize) -> f64 {
    let groups: Vec<usize> = (0..m[u].len()).filter(|&c| m[u][c] == 1.0).collect();
    let mut p = 0.0;
    for &c in &groups {
        let mut hits = 0.0;
        let mut total = 0.0;
        for (j, row) in m.iter().enumerate() {
            if row[c] == 1.0 {
                hits += a[j][o];
                total += a[j].iter().sum::<f64>();
            }
        }
        if total > 0.0 {
            p += hits / total / groups.len() as f64;
        }
    }
    p
}
