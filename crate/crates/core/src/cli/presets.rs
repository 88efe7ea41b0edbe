//! Named configurations reproducing integral inequalities from the literature
//! as instances of the weighted lower bound.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "jensen",
        summary: "f = [1], unit weight on [0, 1], x(τ) = τ",
        toml: r#"experiment = "bound"
id = "jensen"

[kernel]
kind = "legendre"
d = 1

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "unit"

[signal]
kind = "poly"
coeffs = [[0.0, 1.0]]

[cost]
kind = "identity"
n = 1

[params]
expected_upper = 0.3333333333333333
expected_lower = [0.25]
"#,
    },
    Preset {
        name: "seuret-gouaisbaut",
        summary: "unit weight, Legendre kernels ℓ_d, signal x",
        toml: r#"experiment = "sweep"
id = "seuret-gouaisbaut"

[kernel]
kind = "legendre"
d = 4

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "unit"

[signal]
kind = "sin"
freq = 3.0
phase = 0.5
n = 2

[cost]
kind = "matrix"
rows = [[2.0, 0.5], [0.5, 1.0]]
"#,
    },
    Preset {
        name: "seuret-gouaisbaut-derivative",
        summary: "unit weight, Legendre kernels ℓ_d, signal ẋ",
        toml: r#"experiment = "sweep"
id = "seuret-gouaisbaut-derivative"

[kernel]
kind = "legendre"
d = 4

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "unit"

[signal]
kind = "sin"
freq = 3.0
phase = 0.5
derivative = true

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "feng-nguang-weighted",
        summary: "general weight w(τ), monomial kernels m(τ)",
        toml: r#"experiment = "bound"
id = "feng-nguang-weighted"

[kernel]
kind = "monomial"
d = 3

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "jacobi"
alpha = 1.0
beta = 1.0

[signal]
kind = "exp"
rate = 1.5

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "feng-nguang",
        summary: "unit weight, monomial kernels m(τ)",
        toml: r#"experiment = "bound"
id = "feng-nguang"

[kernel]
kind = "monomial"
d = 3

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "unit"

[signal]
kind = "exp"
rate = 1.5

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "park-lee-lee",
        summary: "unit weight, f = [1; p(τ)] with p zero-mean and mutually orthogonal",
        toml: r#"experiment = "bound"
id = "park-lee-lee"

[kernel]
kind = "legendre"
d = 3

[domain]
kind = "finite"
a = -1.0
b = 0.0

[weight]
kind = "unit"

[signal]
kind = "poly"
coeffs = [[1.0, 0.5, -2.0, 0.0, 1.0]]

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "gyurkovics-takacs",
        summary: "weight (τ−a)^p, kernels j^{0,p}, signal x",
        toml: r#"experiment = "reduction"
id = "gyurkovics-takacs"

[kernel]
kind = "jacobi"
d = 3
alpha = 0.0
beta = 2.0

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "jacobi"
alpha = 0.0
beta = 2.0

[signal]
kind = "poly"
coeffs = [[1.0, -1.0, 0.5, 2.0, -0.7]]

[cost]
kind = "identity"
n = 1

[params]
p = 2
"#,
    },
    Preset {
        name: "gyurkovics-takacs-derivative",
        summary: "weight (τ−a)^p, kernels j^{0,p}, signal ẋ",
        toml: r#"experiment = "bound"
id = "gyurkovics-takacs-derivative"

[kernel]
kind = "jacobi"
d = 3
alpha = 0.0
beta = 2.0

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "jacobi"
alpha = 0.0
beta = 2.0

[signal]
kind = "sin"
freq = 2.0
derivative = true

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "chen-xu-lower",
        summary: "weight (τ−a)^{m−1}, kernels j^{0,m−1}",
        toml: r#"experiment = "bound"
id = "chen-xu-lower"

[kernel]
kind = "jacobi"
d = 3
alpha = 0.0
beta = 2.0

[domain]
kind = "finite"
a = 0.0
b = 2.0

[weight]
kind = "jacobi"
alpha = 0.0
beta = 2.0

[signal]
kind = "sin"
freq = 1.5

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "chen-xu-upper",
        summary: "weight (b−τ)^{m−1}, kernels j^{m−1,0}",
        toml: r#"experiment = "bound"
id = "chen-xu-upper"

[kernel]
kind = "jacobi"
d = 3
alpha = 2.0
beta = 0.0

[domain]
kind = "finite"
a = 0.0
b = 2.0

[weight]
kind = "jacobi"
alpha = 2.0
beta = 0.0

[signal]
kind = "sin"
freq = 1.5

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "li-huang-yan-upper",
        summary: "weight (b−τ)^m, kernels j^{0,m}",
        toml: r#"experiment = "bound"
id = "li-huang-yan-upper"

[kernel]
kind = "jacobi"
d = 3
alpha = 0.0
beta = 2.0

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "jacobi"
alpha = 2.0
beta = 0.0

[signal]
kind = "exp"
rate = -1.0

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "li-huang-yan-lower",
        summary: "weight (τ−a)^m, kernels j^{m,0}",
        toml: r#"experiment = "bound"
id = "li-huang-yan-lower"

[kernel]
kind = "jacobi"
d = 3
alpha = 2.0
beta = 0.0

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "jacobi"
alpha = 0.0
beta = 2.0

[signal]
kind = "exp"
rate = -1.0

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "park-kwon-ryu",
        summary: "weight (τ−a)^k, kernels j^{k,0}",
        toml: r#"experiment = "bound"
id = "park-kwon-ryu"

[kernel]
kind = "jacobi"
d = 4
alpha = 1.0
beta = 0.0

[domain]
kind = "finite"
a = 0.0
b = 1.0

[weight]
kind = "jacobi"
alpha = 0.0
beta = 1.0

[signal]
kind = "ramp"
breakpoint = 0.4

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "liu-fridman",
        summary: "half-line, weight K(τ) = e^{−τ}, f = [1; g(τ)] with g(τ) = τ",
        toml: r#"experiment = "bound"
id = "liu-fridman"

[kernel]
kind = "monomial"
d = 2

[domain]
kind = "half_line"

[weight]
kind = "laguerre"
alpha = 0.0

[signal]
kind = "exp"
rate = -1.0

[cost]
kind = "identity"
n = 1
"#,
    },
    Preset {
        name: "huang-he",
        summary: "[−h, 0], weight (−τ)^b (τ+h)^a, kernels j^{b,a}, signal ẋ",
        toml: r#"experiment = "bound"
id = "huang-he"

[kernel]
kind = "jacobi"
d = 3
alpha = 2.0
beta = 1.0

[domain]
kind = "finite"
a = -1.0
b = 0.0

[weight]
kind = "jacobi"
alpha = 2.0
beta = 1.0

[signal]
kind = "sin"
freq = 2.0
phase = 0.3
derivative = true

[cost]
kind = "identity"
n = 1
"#,
    },
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.name == name).map(|p| p.toml)
}
