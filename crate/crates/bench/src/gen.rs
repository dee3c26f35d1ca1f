//! Deterministic benchmark program generators.
//!
//! Each generator returns analyzer source text; given equal parameters the
//! text is byte-identical, so benchmark runs are reproducible.

/// Series coefficients of the arctan kernel, kept verbatim as decimal
/// strings so the generated source embeds them digit-for-digit.
const ARCTAN_COEFFS: [&str; 8] = [
    "0.0028662257",
    "-0.0161657367",
    "0.0429096138",
    "-0.0752896400",
    "0.1065626393",
    "-0.1420889944",
    "0.1999355085",
    "-0.3333314528",
];

/// `x` repeated `n` times as a parenthesized product: the source language
/// has no power operator, so `x^n` is spelled `(x*x*…*x)`.
fn xpow(n: usize) -> String {
    let mut s = String::from("(");
    for i in 0..n {
        if i > 0 {
            s.push('*');
        }
        s.push('x');
    }
    s.push(')');
    s
}

/// The 8-term series `1 - C1 sep x^2 + C2 sep x^4 + … + C8 sep x^16`,
/// with `sep` either `/` (reciprocal branches) or `*` (polynomial branch).
fn arctan_series(sep: char) -> String {
    let mut s = format!("1 - C1{sep}{}", xpow(2));
    for k in 2..=8usize {
        s.push_str(&format!(" + C{k}{sep}{}", xpow(2 * k)));
    }
    s
}

/// The arctan benchmark: a three-way branch cascade evaluating either a
/// reciprocal series (|x| > 1) or a polynomial series, with the eight
/// fixed coefficients bound to `C1 … C8` up front.
///
/// The cascade is reproduced verbatim from the original formulation,
/// including its quirk: the first `if (x > 1.)` has no `else`, and the
/// `else` of the second `if (x < 1.)` therefore also fires when x ≥ 1,
/// overwriting `y` with the polynomial branch.
pub fn gen_arctan(input: (f64, f64)) -> String {
    let (lo, hi) = input;
    let recip = arctan_series('/');
    let poly = arctan_series('*');
    let mut s = format!("x = [{lo}, {hi}];\n");
    for (i, c) in ARCTAN_COEFFS.iter().enumerate() {
        s.push_str(&format!("C{} = {c};\n", i + 1));
    }
    s.push_str(&format!(
        "if (x > 1.) {{\n  y = 1.5708 - 1/x*({recip});\n}}\n"
    ));
    s.push_str(&format!(
        "if (x < 1.) {{\n  y = -1.5708 - 1/x*({recip});\n}} else {{\n  y = x*({poly});\n}}\n"
    ));
    s
}

/// The Householder inverse-square-root iteration, unrolled `depth` times:
/// x₀ = 2⁻⁴ and x_{n+1} = x_n·(1 + ½t + ⅜t²) with t = 1 − A·x_n².
pub fn gen_householder(depth: u32, a: (f64, f64)) -> String {
    let (lo, hi) = a;
    let mut s = format!("A = [{lo}, {hi}];\nx = 0.0625;\n");
    for _ in 0..depth {
        s.push_str("t = 1 - A*(x*x);\n");
        s.push_str("x = x*(1 + 0.5*t + 0.375*(t*t));\n");
    }
    s
}

/// One cell of the partitioned square-root benchmark:
/// y = √(x² + x − ½) / √(x² + ½) on the given sub-interval.
pub fn gen_stolfi_cell(cell: (f64, f64)) -> String {
    let (lo, hi) = cell;
    format!("x = [{lo}, {hi}];\ny = sqrt(x*x + x - 0.5) / sqrt(x*x + 0.5);\n")
}
