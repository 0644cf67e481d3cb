use super::Presentation;
use crate::error::{Error, Result};

/// How many levels of the involution family `f_n` are declared.
pub const GRIGORCHUK_FAMILY_LEVELS: usize = 8;

/// How many of the `x^(i)` normalizer elements are declared.
pub const GUPTA_SIDKI_X_LEVELS: usize = 6;

pub const GRIGORCHUK_TEXT: &str = "\
# The first Grigorchuk group on the binary tree.
name = grigorchuk
sig = binary
gen a = perm[1,0] (1, 1)
gen b = perm[0,1] (a, c)
gen c = perm[0,1] (a, d)
gen d = perm[0,1] (1, b)
# Involutions (1, (ad)^2, 1, (ad)^2, ...) placed at level n.
norm f1 = perm[0,1] (1, (a*d)^2)
";

pub const GUPTA_SIDKI_TEXT: &str = "\
# The Gupta-Sidki 3-group on the ternary tree; g is the generator gamma.
name = gupta-sidki
sig = ternary
gen x = perm[1,2,0] (1, 1, 1)
gen g = perm[0,1,2] (x, x^-1, g)
norm x1 = perm[0,1,2] (x, x, x)
# Conjugators realizing the outer automorphisms tau1 (x -> x^-1),
# tau2 (g -> g^-1) and tau3 = tau2 tau1.
norm t1 = perm[1,0,2] (t1, t1, t1)
norm t2 = perm[0,1,2] (t3, t3, t3)
norm t3 = perm[1,0,2] (t2, t2, t2)
";

fn grigorchuk_text() -> String {
    let mut text = GRIGORCHUK_TEXT.to_string();
    for n in 2..=GRIGORCHUK_FAMILY_LEVELS {
        text.push_str(&format!("norm f{n} = perm[0,1] (f{m}, f{m})\n", m = n - 1));
    }
    text
}

fn gupta_sidki_text() -> String {
    let mut text = GUPTA_SIDKI_TEXT.to_string();
    for i in 2..=GUPTA_SIDKI_X_LEVELS {
        text.push_str(&format!("norm x{i} = perm[0,1,2] (x{m}, x{m}, x{m})\n", m = i - 1));
    }
    text
}

pub fn grigorchuk() -> Presentation {
    Presentation::parse(&grigorchuk_text()).expect("built-in presentation parses")
}

pub fn gupta_sidki() -> Presentation {
    Presentation::parse(&gupta_sidki_text()).expect("built-in presentation parses")
}

pub const BUILTIN_NAMES: [&str; 2] = ["grigorchuk", "gupta-sidki"];

pub fn builtin(name: &str) -> Result<Presentation> {
    match name {
        "grigorchuk" => Ok(grigorchuk()),
        "gupta-sidki" | "gupta_sidki" => Ok(gupta_sidki()),
        other => Err(Error::invalid(
            "presentation",
            format!("no built-in named `{other}` (known: {})", BUILTIN_NAMES.join(", ")),
        )),
    }
}
