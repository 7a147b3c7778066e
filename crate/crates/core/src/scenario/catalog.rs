use super::Scenario;

#[allow(clippy::too_many_arguments)]
const fn s(
    t: Option<u32>,
    p: Option<u32>,
    tau_g: Option<u32>,
    tau_w: Option<u32>,
    e: Option<u32>,
    l: Option<u32>,
    a: Option<u32>,
    r: Option<u32>,
) -> Scenario {
    Scenario {
        t,
        p,
        tau_g,
        tau_w,
        e,
        l,
        a,
        r,
    }
}

const N: Option<u32> = None;

const fn v(x: u32) -> Option<u32> {
    Some(x)
}

/// The proposed what-if scenarios, in publication order.
pub static CATALOG: [(&str, Scenario); 42] = [
    ("A.1", s(v(1), N, N, N, N, N, N, N)),
    ("A.2", s(v(2), N, N, N, N, N, N, N)),
    ("B.1", s(N, v(1), N, N, N, N, N, N)),
    ("C.1", s(N, N, v(90), v(180), N, N, N, N)),
    ("C.2", s(N, N, v(210), v(210), N, N, N, N)),
    ("C.3", s(N, N, v(60), v(120), N, N, N, N)),
    ("C.4", s(N, N, v(90), N, N, N, N, N)),
    ("C.5", s(N, N, v(60), v(180), N, N, N, N)),
    ("C.6", s(N, N, v(60), v(210), N, N, N, N)),
    ("C.7", s(N, N, v(120), N, N, N, N, N)),
    ("D.1", s(N, N, N, N, N, v(50), N, N)),
    ("D.2", s(N, N, N, N, N, v(60), N, N)),
    ("D.3", s(N, N, N, N, N, v(75), N, N)),
    ("D.4", s(N, N, N, N, N, v(100), N, N)),
    ("D.5", s(N, N, N, N, N, v(10), N, N)),
    ("D.6", s(N, N, N, N, N, v(15), N, N)),
    ("D.7", s(N, N, N, N, N, v(20), N, N)),
    ("E.1", s(N, N, N, N, v(5), N, N, N)),
    ("E.2", s(N, N, N, N, v(10), N, N, N)),
    ("E.3", s(N, N, N, N, v(15), N, N, N)),
    ("E.4", s(N, N, N, N, v(20), N, N, N)),
    ("F.1", s(N, N, N, N, N, N, v(1), N)),
    ("G.1", s(N, N, N, N, N, N, N, v(10))),
    ("G.2", s(N, N, N, N, N, N, N, v(15))),
    ("G.3", s(N, N, N, N, N, N, N, v(20))),
    ("G.4", s(N, N, N, N, N, N, N, v(25))),
    ("G.5", s(N, N, N, N, N, N, N, v(30))),
    ("Cb.1", s(N, N, v(120), N, v(10), v(50), N, N)),
    ("Cb.2", s(N, N, v(120), N, v(10), v(20), N, N)),
    ("Cb.3", s(N, N, v(120), N, v(10), v(50), N, v(30))),
    ("Cb.4", s(N, N, v(120), N, N, v(50), N, N)),
    ("Cb.5", s(N, N, v(90), N, v(10), v(50), N, N)),
    ("Cb.6", s(N, N, N, N, N, v(10), N, v(15))),
    ("Cb.7", s(N, N, N, N, N, v(20), N, v(15))),
    ("Cb.8", s(N, N, N, N, N, v(10), N, v(20))),
    ("Cb.9", s(N, N, N, N, N, v(15), N, v(20))),
    ("Cb.10", s(N, N, N, N, N, v(20), N, v(20))),
    ("Cb.11", s(N, N, N, N, N, v(10), N, v(30))),
    ("Cb.12", s(N, N, N, N, N, v(15), N, v(30))),
    ("Cb.13", s(N, N, v(120), N, v(15), N, N, N)),
    ("Cb.14", s(N, N, N, N, N, v(50), N, v(30))),
    ("Cb.15", s(N, N, v(120), N, v(15), v(50), N, v(30))),
];
