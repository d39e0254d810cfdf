use num_complex::Complex64;

/// Sum over perfect matchings of `gram[i][σ(i)]`, with the sign of `σ`
/// when the smeared operators are odd: the permanent or the determinant.
pub fn wick_sum(gram: &[Vec<Complex64>], odd: bool) -> Complex64 {
    let n = gram.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    permute(&mut perm, 0, &mut |p| {
        let sign = if odd && parity(p) { -1.0 } else { 1.0 };
        let prod: Complex64 = p.iter().enumerate().map(|(i, &j)| gram[i][j]).product();
        total += prod * sign;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// One factor of a vacuum expectation value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    /// Annihilation operator smeared with the `i`-th bra function.
    Down(usize),
    /// Creation operator smeared with the `j`-th ket function.
    Up(usize),
}

/// `⟨0| ops |0⟩` by moving annihilators to the right one swap at a time,
/// with `[Down(i), Up(j)] = gram[i][j]` (anticommutator when `odd`).
pub fn vacuum_expectation(ops: &[Ladder], gram: &[Vec<Complex64>], odd: bool) -> Complex64 {
    let Some(pos) = ops.iter().position(|o| matches!(o, Ladder::Down(_))) else {
        return if ops.is_empty() { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    };
    // Creation operators on the left of the first annihilator kill the bra vacuum.
    if pos > 0 {
        return Complex64::new(0.0, 0.0);
    }
    let Ladder::Down(i) = ops[0] else { unreachable!() };
    let mut total = Complex64::new(0.0, 0.0);
    let sign = if odd { -1.0 } else { 1.0 };
    let mut carried = 1.0;
    for k in 1..ops.len() {
        if let Ladder::Up(j) = ops[k] {
            let mut rest: Vec<Ladder> = ops[1..].to_vec();
            rest.remove(k - 1);
            total += gram[i][j] * carried * vacuum_expectation(&rest, gram, odd);
        }
        carried *= sign;
    }
    total
}
