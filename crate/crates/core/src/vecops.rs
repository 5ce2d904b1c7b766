//! Small dense-vector helpers shared by the solvers.

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x + t * u`
pub fn axpy(x: &[f64], t: f64, u: &[f64]) -> Vec<f64> {
    x.iter().zip(u).map(|(xi, ui)| xi + t * ui).collect()
}

pub fn scale_in_place(v: &mut [f64], s: f64) {
    v.iter_mut().for_each(|a| *a *= s);
}
