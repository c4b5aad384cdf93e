use anyhow::Result;
use logarr::hodge;
use logarr::multiarr::{strictness_witness, member, search_basis};
use logarr::universal::{
    check_universal, exponent_dichotomy, invariant_part_collapse, shifted_universality, ziegler, TComb,
};
use logarr::{FlatFrame, GroupData, Mult};
use serde_json::json;

use crate::report::Check;

pub const ANCHOR_CATALOG: &str = "|W| = prod d_i, Molien degrees, h = (|R|+|A|)/l, e_i + e*_(l+1-i) = h";
pub const ANCHOR_JACOBIAN: &str = "det J(t,x) = c J and Q(A,omega) = c Q J";
pub const ANCHOR_SAITO: &str = "Saito criterion: det = c Q_+/Q_- agrees with the degree count";
pub const ANCHOR_STRICT: &str = "Q_+ d_alpha lies in D(A,nu) but not in D(A,nu + delta_H)";
pub const ANCHOR_FLAT: &str = "M_eta = t_l 1 + M'(t'), eta_1 Euler, det M_eta monic";
pub const ANCHOR_HODGE: &str = "Xi^(k) is an invariant basis of D(A,-k omega+1), T-independent with t_l-decomposition";
pub const ANCHOR_UNIVERSAL: &str = "E_k = nabla_D^k(E) is (-k omega)-universal";
pub const ANCHOR_SHIFT: &str = "nabla_D^-1 maps (k omega)-universal to ((k+1) omega)-universal; f_ij in T, det f constant";
pub const ANCHOR_COLLAPSE: &str = "D(A,-k omega)^W = D(A,-k omega+1)^W, strict containment of modules";
pub const ANCHOR_ZIEGLER: &str = "(A, m omega - 1) is free with exponents exp(A, omega - 1) + (m-1) h";
pub const ANCHOR_DICHOTOMY: &str = "{-e_i} = {-e_i*} exactly for real groups";

pub fn saito_suite(group: &GroupData) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let c = group.consistency()?;
    let catalog_ok = c.order as u64 == c.degree_product
        && c.molien_matches
        && c.molien_dims_match
        && c.reflection_count_matches
        && c.well_generated
        && c.unitary;
    out.push(Check::new("catalog", ANCHOR_CATALOG, catalog_ok, &c));
    let jac_ok = c.jacobian_splits && c.det_j_witness.is_some() && c.q_omega_witness.is_some();
    out.push(Check::new(
        "jacobian",
        ANCHOR_JACOBIAN,
        jac_ok,
        json!({ "det_j": c.det_j_witness, "q_omega": c.q_omega_witness }),
    ));
    for (label, k, shift) in [("1", 0, 1), ("-1", 0, -1), ("omega", 1, 0), ("omega-1", 1, -1), ("-omega+1", -1, 1)] {
        let nu = Mult::omega(&group.hyperplanes, k, shift);
        let cert = search_basis(&nu)?;
        let ok = cert.is_basis() && cert.routes_agree();
        out.push(Check::new(format!("saito:{label}"), ANCHOR_SAITO, ok, &cert));
    }
    let nu = Mult::omega(&group.hyperplanes, 1, 0);
    let w = strictness_witness(&nu, 0);
    let ok = member(&w, &nu) && !member(&w, &nu.map(|i, v| if i == 0 { v + 1 } else { v }));
    out.push(Check::new("strict:omega", ANCHOR_STRICT, ok, &w));
    Ok(out)
}

pub fn hodge_suite(frame: &FlatFrame, k_min: i64, k_max: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let flat_ok = frame.shape_holds() && frame.eta1_is_euler() && frame.discriminant_monic();
    out.push(Check::new(
        "flat",
        ANCHOR_FLAT,
        flat_ok,
        json!({ "m_eta": frame.m_eta, "correction": frame.correction, "delta_scalar": frame.delta_scalar }),
    ));
    let report = hodge::verify_hodge(frame, k_min, k_max)?;
    for r in &report.records {
        out.push(Check::new(format!("hodge:k={}", r.k), ANCHOR_HODGE, r.passed(), r));
    }
    Ok(out)
}

pub fn universal_suite(group: &GroupData, frame: &FlatFrame, k_min: i64, k_max: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in k_min..=k_max {
        let ek = TComb::euler(frame, k).to_field(frame);
        let cert = check_universal(&ek, &Mult::omega(&frame.hyperplanes, -k, 0))?;
        out.push(Check::new(format!("universal:k={k}"), ANCHOR_UNIVERSAL, cert.is_universal(), &cert));
    }
    let mut zeta = TComb::euler(frame, 0);
    for k in 0..2 {
        let s = shifted_universality(frame, &zeta, k)?;
        let direct = TComb::euler(frame, -(k + 1)).to_field(frame);
        let ok = s.passed() && s.to.zeta == direct;
        out.push(Check::new(format!("shift:k={k}"), ANCHOR_SHIFT, ok, &s));
        zeta = s.shifted;
    }
    for k in 0..=2 {
        let r = invariant_part_collapse(group, frame, k)?;
        out.push(Check::new(format!("collapse:k={k}"), ANCHOR_COLLAPSE, r.passed(), &r));
    }
    let z = ziegler(frame, 2)?;
    out.push(Check::new("ziegler:m=2", ANCHOR_ZIEGLER, z.passed(), &z));
    let (e, estar, same) = exponent_dichotomy(group);
    out.push(Check::new(
        "dichotomy",
        ANCHOR_DICHOTOMY,
        same == group.is_real(),
        json!({ "minus_exponents": e, "minus_coexponents": estar, "coincide": same, "real": group.is_real() }),
    ));
    Ok(out)
}
