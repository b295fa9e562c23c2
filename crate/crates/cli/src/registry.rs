//! Every theorem checker and the one subcommand that reaches it.

#[derive(Clone, Copy, Debug)]
pub struct Theorem {
    pub id: &'static str,
    pub command: &'static str,
    /// Library function evaluated.
    pub checker: &'static str,
    pub summary: &'static str,
    /// A small invocation exercising the checker.
    pub example: &'static [&'static str],
}

pub const REGISTRY: &[Theorem] = &[
    Theorem {
        id: "equivalence",
        command: "influences",
        checker: "influence::equivalence_suite",
        summary: "globalness and generalised-influence equivalences",
        example: &["influences", "--fn", "antitribes:s=2,w=2", "--p", "0.25", "--equivalence", "1"],
    },
    Theorem {
        id: "warmup",
        command: "stability",
        checker: "stability::warmup_check",
        summary: "‖f^{≤r}‖₂² ≤ 3^r μ^{1.5} on the uniform cube",
        example: &["stability", "--fn", "and:k=3", "--check", "warmup"],
    },
    Theorem {
        id: "normsense",
        command: "stability",
        checker: "stability::concentration_check",
        summary: "‖f^{≤r}‖₂² ≤ 10^r δ^{1/3} μ for sparse global f",
        example: &["stability", "--fn", "antitribes:s=3,w=2", "--p", "0.1", "--check", "normsense"],
    },
    Theorem {
        id: "normsense0",
        command: "stability",
        checker: "stability::concentration_check",
        summary: "‖f^{≤r}‖₂² ≤ 5^r δ^{1/3} E[f²] with δ the largest I_S(f^{≤r})",
        example: &["stability", "--fn", "majority", "--n", "5", "--check", "normsense0"],
    },
    Theorem {
        id: "normtruncate",
        command: "stability",
        checker: "stability::normtruncate_check",
        summary: "‖f^{≤r}‖₂² ≤ μ² + 5^{r−1} δ^{1/3} σ² I[f]",
        example: &["stability", "--fn", "tribes:s=2,w=2", "--p", "0.3", "--check", "normtruncate"],
    },
    Theorem {
        id: "noise-sensitivity",
        command: "stability",
        checker: "noise::noise_sensitivity_check",
        summary: "Stab_ρ(f) ≤ ε μ for sparse global f",
        example: &["stability", "--fn", "and:k=4", "--p", "0.1", "--check", "noise-sensitivity", "--rho", "0.5"],
    },
    Theorem {
        id: "13",
        command: "check-hyper",
        checker: "hyper::hyper_check",
        summary: "‖T_{1/5} f‖₄ ≤ β^{1/4} ‖f‖₂",
        example: &["check-hyper", "--theorem", "13", "--fn", "antitribes:s=2,w=3", "--p", "0.2"],
    },
    Theorem {
        id: "34",
        command: "check-hyper",
        checker: "hyper::hypref_bound_check",
        summary: "‖T_ρ f‖₄⁴ ≤ Σ_S (3σ²ρ⁴)^{|S|} I_S(f)²",
        example: &["check-hyper", "--theorem", "34", "--fn", "majority", "--n", "5", "--p", "0.1"],
    },
    Theorem {
        id: "35",
        command: "check-hyper",
        checker: "hyper::hyper_check",
        summary: "‖T_{1/√24} f‖₄ ≤ β′^{1/4} ‖f‖₂",
        example: &["check-hyper", "--theorem", "35", "--fn", "dictator", "--p", "0.05"],
    },
    Theorem {
        id: "practice",
        command: "check-hyper",
        checker: "hyper::practice_bound_check",
        summary: "‖f‖₄ ≤ 5^{3r/4} δ^{1/4} ‖f‖₂^{1/2} for f of degree ≤ r",
        example: &["check-hyper", "--theorem", "practice", "--fn", "tribes:s=2,w=2", "--p", "0.25"],
    },
    Theorem {
        id: "qnorm",
        command: "check-hyper",
        checker: "hyper::qnorm_cube_check",
        summary: "‖T_ρ f‖_q^q ≤ Σ_S σ_S^{2−q} ‖D_S f‖₂^q",
        example: &["check-hyper", "--theorem", "qnorm", "--fn", "or:k=3", "--p", "0.1", "--q", "4"],
    },
    Theorem {
        id: "bonami",
        command: "check-hyper",
        checker: "hyper::bonami_check",
        summary: "‖f‖₄ ≤ √3^r ‖f‖₂ for f of degree ≤ r on the uniform cube",
        example: &["check-hyper", "--theorem", "bonami", "--fn", "majority", "--n", "5"],
    },
    Theorem {
        id: "replacement",
        command: "check-hyper",
        checker: "hyper::replacement_step_check",
        summary: "one coordinate replacement step of the hybrid argument",
        example: &["check-hyper", "--theorem", "replacement", "--fn", "majority", "--n", "4", "--p", "0.1"],
    },
    Theorem {
        id: "bourgain",
        command: "isoperimetry",
        checker: "stability::bourgain_witness_search",
        summary: "pI ≤ Kμ(1−μ) forces I_S ≥ 5^{−8K} for some |S| ≤ 2K",
        example: &["isoperimetry", "--theorem", "bourgain", "--fn", "majority", "--n", "5"],
    },
    Theorem {
        id: "kahn-kalai",
        command: "isoperimetry",
        checker: "stability::kahn_kalai_variant_search",
        summary: "pI < Kμ forces μ(f_{J→1}) ≥ e^{−CK} for some |J| ≤ CK",
        example: &["isoperimetry", "--theorem", "kahn-kalai", "--fn", "and:k=3", "--p", "0.1", "--k", "3.5"],
    },
    Theorem {
        id: "eg1",
        command: "isoperimetry",
        checker: "stability::sharpness_table",
        summary: "anti-tribes restriction table against 2^{t/s} μ",
        example: &["isoperimetry", "--theorem", "eg1", "--s", "3", "--w", "2", "--p", "0.5"],
    },
    Theorem {
        id: "eg2",
        command: "isoperimetry",
        checker: "stability::sharpness_table",
        summary: "pinned anti-tribes restriction table against (1 − K/s)^{s−u}",
        example: &["isoperimetry", "--theorem", "eg2", "--s", "4", "--w", "2", "--t", "2", "--p", "0.4"],
    },
    Theorem {
        id: "m-global",
        command: "threshold",
        checker: "threshold::m_global_certify",
        summary: "μ_p(f_{J→1}) ≤ μ_p(f)^{0.01} for |J| ≤ M on a grid",
        example: &["threshold", "--theorem", "m-global", "--fn", "majority", "--n", "7", "--m", "1", "--interval", "0.3,0.5", "--grid-size", "4"],
    },
    Theorem {
        id: "sharp",
        command: "threshold",
        checker: "threshold::sharp_threshold_check",
        summary: "μ_q ≥ μ_p^{(p/q)^{1/C}} for M-global monotone f",
        example: &["threshold", "--theorem", "sharp", "--fn", "majority", "--n", "7", "--p", "0.3", "--q", "0.45", "--m", "1", "--c", "2", "--grid-size", "4"],
    },
    Theorem {
        id: "noise-route",
        command: "threshold",
        checker: "threshold::noise_route_check",
        summary: "μ_q ≥ μ_p/ε for sparse global monotone f",
        example: &["threshold", "--theorem", "noise-route", "--fn", "and:k=4", "--p", "0.05", "--q", "0.1"],
    },
    Theorem {
        id: "directed",
        command: "threshold",
        checker: "noise::directed_threshold",
        summary: "μ_q ≥ μ_p² / Stab_ρ for monotone f",
        example: &["threshold", "--theorem", "directed", "--fn", "tribes:s=2,w=2", "--p", "0.2", "--q", "0.6"],
    },
    Theorem {
        id: "russo",
        command: "threshold",
        checker: "threshold::russo_check",
        summary: "dμ_p/dp = I_p[f] for monotone f",
        example: &["threshold", "--theorem", "russo", "--fn", "majority", "--n", "3", "--p", "0.5"],
    },
    Theorem {
        id: "es-invariants",
        command: "product",
        checker: "product::ESDecomposition::invariants",
        summary: "reconstruction, locality, orthogonality and Parseval of f^{=S}",
        example: &["product", "--random", "3,3,7", "--theorem", "es-invariants"],
    },
    Theorem {
        id: "es-hyper",
        command: "product",
        checker: "product::es_hyper_check",
        summary: "‖T_ρ f‖_q^q ≤ Σ_S σ_S^{2−q} ‖L_S f‖₂^q",
        example: &["product", "--random", "3,3,7", "--theorem", "es-hyper"],
    },
    Theorem {
        id: "holder",
        command: "product",
        checker: "product::holder_term_check",
        summary: "|E Π f_i| ≤ Π ‖f_i‖₂ Π_j σ_{T_j}^{2−j}",
        example: &["product", "--random", "3,3,7", "--theorem", "holder", "--sets", "3,6,5,7"],
    },
    Theorem {
        id: "moment",
        command: "product",
        checker: "product::single_factor_moment_check",
        summary: "‖f‖_q^q ≤ ‖f‖₂^q σ^{2−q} on one factor",
        example: &["product", "--random", "1,4,3", "--theorem", "moment"],
    },
    Theorem {
        id: "invariance",
        command: "invariance",
        checker: "invariance::invariance_bound_check",
        summary: "|E φ(f(X)) − E φ(f(Y))| ≤ 2^{12d} ‖φ‴‖ W_∅ √ε",
        example: &["invariance"],
    },
];

pub fn lookup(command: &str, id: &str) -> Option<&'static Theorem> {
    REGISTRY.iter().find(|t| t.command == command && t.id == id)
}

pub fn ids_for(command: &str) -> Vec<&'static str> {
    REGISTRY.iter().filter(|t| t.command == command).map(|t| t.id).collect()
}
