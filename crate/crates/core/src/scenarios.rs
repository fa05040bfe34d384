//! Named verification scenarios and their reports.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::codes::{code_of_classes, de_code, isotropy_bound_holds, image_dimension, CodeFixture, IsotropyCheck};
use crate::constructions::{example1, example1_degenerate, example2, example3, Construction, FIBRE_SEARCH_DEPTH};
use crate::covers::{
    bicanonical_decomposition, bicanonical_eigenspaces, bidouble_invariants, branch_preimage, contractions, count_double_fibres,
    double_cover_chi, etale_double, hyperplane_invariants, numeri_identities, slope_check, ConfigurationChoice,
    CoverDocument, CoverError, InvariantReport, LineBundleSource,
};
use crate::geometry::h0_class;
use crate::lattice::{arithmetic_genus, castelnuovo_bound, BlowupLattice, DivisorClass};

pub const SCENARIOS: [&str; 7] = [
    "example1",
    "example1-degenerate",
    "example2",
    "example3",
    "lemma-numeri",
    "codes",
    "bounds",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_bundles: Option<LineBundleSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibre_search_depth: Option<u32>,
}

impl ScenarioReport {
    fn new(scenario: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            scenario: scenario.into(),
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
            invariants: None,
            line_bundles: None,
            fibre_search_depth: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// One line per check, then the summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {}\n", self.scenario);
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  [{tag}] {}: computed {} expected {} ({})\n",
                c.id, c.computed, c.expected, c.anchor
            ));
        }
        if let Some(inv) = &self.invariants {
            out.push_str(&format!("  invariants {}\n", serde_json::to_string(inv).expect("plain data")));
        }
        if let Some(src) = self.line_bundles {
            out.push_str(&format!("  line bundles {}\n", serde_json::to_string(&src).expect("plain data")));
        }
        out.push_str(&format!(
            "  {} checks, {} passed, {} failed\n",
            self.summary.total, self.summary.passed, self.summary.failed
        ));
        out
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}; expected one of {SCENARIOS:?}")]
    Unknown(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse cover description: {0}")]
    Parse(String),
    #[error("invalid building data: {0}")]
    Invalid(#[from] CoverError),
}

impl ScenarioError {
    /// 2 for unusable input, 1 for data that parses but fails validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Invalid(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn eq<T: Serialize>(&mut self, id: &str, anchor: &str, expected: T, computed: T) {
        let expected = serde_json::to_value(expected).expect("plain data");
        let computed = serde_json::to_value(computed).expect("plain data");
        self.0.push(Check {
            id: id.into(),
            anchor: anchor.into(),
            pass: expected == computed,
            expected,
            computed,
        });
    }

    /// A failed computation becomes a failed check carrying the error.
    fn attempt<T: Serialize, E: std::fmt::Display>(
        &mut self,
        id: &str,
        anchor: &str,
        expected: T,
        computed: Result<T, E>,
    ) {
        match computed {
            Ok(v) => self.eq(id, anchor, expected, v),
            Err(e) => self.0.push(Check {
                id: id.into(),
                anchor: anchor.into(),
                expected: serde_json::to_value(expected).expect("plain data"),
                computed: json!({ "error": e.to_string() }),
                pass: false,
            }),
        }
    }
}

/// Runs one named scenario; `seed` picks the general point where one is needed.
pub fn run_scenario(name: &str, seed: u64) -> Result<ScenarioReport, ScenarioError> {
    let checks = match name {
        "example1" => example1_checks(),
        "example1-degenerate" => degenerate_checks(seed),
        "example2" => example2_checks(),
        "example3" => example3_checks(),
        "lemma-numeri" => numeri_checks(),
        "codes" => codes_checks(),
        "bounds" => bounds_checks(),
        _ => return Err(ScenarioError::Unknown(name.into())),
    };
    let mut report = ScenarioReport::new(name, checks.0);
    if name.starts_with("example") {
        report.fibre_search_depth = Some(FIBRE_SEARCH_DEPTH);
    }
    Ok(report)
}

/// Checks shared by the cover examples.
fn cover_checks(c: &mut Checks, ex: &Construction, expect: &InvariantReport, anchor: &str) -> Option<InvariantReport> {
    let report = ex.report();
    let get = |f: fn(&InvariantReport) -> Value| report.as_ref().map(f).map_err(Clone::clone);
    c.attempt("validate", "2L1 = D2 + D3 and 2L2 = D1 + D3", true, ex.data.validate().map(|_| true));
    c.attempt("chi", anchor, json!(expect.chi), get(|r| json!(r.chi)));
    c.attempt("K2_cover", "2K_X = pi^*(2K + D)", json!(expect.k2_cover), get(|r| json!(r.k2_cover)));
    c.attempt("contractions", anchor, json!(expect.contractions), get(|r| json!(r.contractions)));
    c.attempt("K2_minimal", anchor, json!(expect.k2_minimal), get(|r| json!(r.k2_minimal)));
    c.attempt("pg", anchor, json!(expect.pg), get(|r| json!(r.pg)));
    c.attempt("q", "q = p_g + 1 - chi", json!(expect.q), get(|r| json!(r.q)));
    c.attempt("double_fibres", anchor, json!(expect.double_fibres), get(|r| json!(r.double_fibres)));
    c.attempt(
        "bicanonical_degree",
        "the bicanonical map of S is of degree 2",
        json!(expect.bicanonical_degree),
        get(|r| json!(r.bicanonical_degree)),
    );
    c.attempt(
        "involution",
        "the bicanonical involution coincides with gamma_1",
        json!(expect.involution_index),
        get(|r| json!(r.involution_index)),
    );
    report.ok()
}

fn expected(chi: i64, k2_cover: i64, contractions: u32, fibres: usize) -> InvariantReport {
    InvariantReport {
        chi,
        k2_cover,
        pg: 0,
        q: 0,
        contractions,
        k2_minimal: k2_cover + i64::from(contractions),
        double_fibres: Some(fibres),
        bicanonical_degree: 2,
        involution_index: Some(1),
    }
}

fn bicanonical_split(ex: &Construction, p2: i64) -> Result<Value, CoverError> {
    let b = bicanonical_decomposition(&ex.data, &ex.cfg, p2)?;
    Ok(json!([b.invariant, b.characters]))
}

fn preimage_shape(ex: &Construction, name: &str) -> Result<Value, CoverError> {
    let comp = ex
        .data
        .component(name)
        .ok_or_else(|| CoverError::UnknownComponent(name.into()))?;
    let p = branch_preimage(comp, &ex.data)?;
    Ok(serde_json::to_value(p.shape).expect("plain data"))
}

fn example1_checks() -> Checks {
    let ex = example1();
    let mut c = Checks::default();
    let anchor = "Example 1: p_g(S)=0, K^2_S=7, |F| has 5 double fibres";
    c.attempt(
        "L3",
        "L3 = 4l-2e1-2e2-2e3-e4-e5-e6",
        "4l-2e1-2e2-2e3-e4-e5-e6".to_string(),
        ex.data.validate().map(|l| l.to_string()),
    );
    for s in ["S1", "S2", "S3", "S4"] {
        c.attempt(
            &format!("preimage_{s}"),
            "the inverse image of S_i is the disjoint union of two -1 curves",
            json!({"shape": "split", "genus": 0, "square": -1}),
            preimage_shape(&ex, s),
        );
    }
    cover_checks(&mut c, &ex, &expected(1, -1, 8, 5), anchor);
    c.attempt("P2", "P_2 = chi + K^2 = 8", json!([7, [1, 0, 0]]), bicanonical_split(&ex, 8));
    c
}

fn degenerate_checks(seed: u64) -> Checks {
    let mut c = Checks::default();
    let anchor = "(1,1,1) point: p_g(S)=0, K^2_S=6, |F| has 4 double fibres";
    let base = example1().report();
    let ex = match example1_degenerate(seed) {
        Ok(ex) => ex,
        Err(e) => {
            c.attempt::<bool, _>("resolve_111", anchor, true, Err(e));
            return c;
        }
    };
    c.eq("resolve_111", anchor, true, true);
    c.eq("lattice_n", "blow up the (1,1,1) point", 7, ex.data.lattice().n());
    let got = cover_checks(&mut c, &ex, &expected(1, -2, 8, 4), anchor);
    c.attempt(
        "K2_drop",
        "resolving a (1,1,1) point lowers K^2 by 1",
        1,
        base.map_err(|e| e.to_string())
            .and_then(|b| got.ok_or("pipeline failed".to_string()).map(|g| b.k2_minimal - g.k2_minimal)),
    );
    let through = count_double_fibres(&ex.data, &ex.pencil, &ex.cfg, FIBRE_SEARCH_DEPTH).map(|count| {
        let e = format!("e{}", ex.cfg.len());
        count
            .members
            .iter()
            .filter(|m| m.components.iter().any(|x| x.name == e))
            .map(|m| m.multiplicity)
            .collect::<Vec<_>>()
    });
    c.attempt(
        "fibre_through_P",
        "the pull back of f1 contains the exceptional curve with multiplicity 1, hence it is not a multiple fibre",
        vec![1u8],
        through,
    );
    c.attempt("P2", "P_2 = chi + K^2 = 7", json!([6, [1, 0, 0]]), bicanonical_split(&ex, 7));
    c
}

fn example2_checks() -> Checks {
    let ex = example2();
    let lat = ex.cfg.lattice();
    let mut c = Checks::default();
    let anchor = "Example 2: p_g(X)=0, K^2_S=6, |F| has 5 double fibres";
    c.attempt(
        "L3",
        "L3 = 4l-2e1-2e2-2e3-e4-e5-e6-e7",
        "4l-2e1-2e2-2e3-e4-e5-e6-e7".to_string(),
        ex.data.validate().map(|l| l.to_string()),
    );
    let k = lat.canonical();
    let adjoint = [
        "2l-e2-2e4-e5-e6",
        "4l-e1-2e2-e3-2e4-2e5-2e6-e7",
        "l-e1-e2-e3",
    ];
    for (i, printed) in adjoint.iter().enumerate() {
        let class = &k + &ex.data.line_bundle(i as u8 + 1);
        c.eq(&format!("K+L{}", i + 1), "K + L_i as printed", printed.to_string(), class.to_string());
        c.attempt(
            &format!("h0(K+L{})", i + 1),
            "both h^0(K+L1) and h^0(K+L3) vanish; h^0(K+L2)=0 by Bezout",
            0usize,
            h0_class(&ex.cfg, &class),
        );
    }
    let f1 = ex.cfg.catalogue().class("f1");
    c.attempt(
        "h0(-K+f1)",
        "|-K+f1| has projective dimension 5",
        6usize,
        h0_class(&ex.cfg, &(&f1 - &k)),
    );
    let cat = ex.cfg.catalogue();
    let m_minus_l1 = ["e4", "Delta2bar", "S1", "S2", "S3", "S4"]
        .iter()
        .map(|n| cat.class(n))
        .sum::<DivisorClass>();
    let m = &(2 * &k) + &ex.data.total_branch();
    c.eq(
        "M-L1",
        "M - L1 = e4 + Delta2bar + S1 + S2 + S3 + S4",
        m_minus_l1.to_string(),
        (&m - &ex.data.line_bundle(1)).to_string(),
    );
    c.attempt(
        "h0(M-L1)",
        "h^0(e4+Delta2bar+S1+S2+S3+S4)=1",
        1usize,
        h0_class(&ex.cfg, &m_minus_l1),
    );
    c.attempt(
        "preimage_Delta2bar",
        "the inverse image of Delta2bar is the disjoint union of two -1-curves",
        json!({"shape": "split", "genus": 0, "square": -1}),
        preimage_shape(&ex, "Delta2bar"),
    );
    cover_checks(&mut c, &ex, &expected(1, -4, 10, 5), anchor);
    c.attempt("P2", "P_2(S)=7", json!([6, [1, 0, 0]]), bicanonical_split(&ex, 7));
    c
}

fn example3_checks() -> Checks {
    let ex = example3();
    let lat = ex.cfg.lattice();
    let mut c = Checks::default();
    let anchor = "Example 3: same properties as before";
    c.eq(
        "L1",
        "L1 from 2L1 = D2 + D3",
        lat.class(4, &[1, 1, 1, 2, 2, 2]).to_string(),
        ex.data.line_bundle(1).to_string(),
    );
    c.eq(
        "L2",
        "L2 from 2L2 = D1 + D3",
        example2().data.line_bundle(2).to_string(),
        ex.data.line_bundle(2).to_string(),
    );
    c.eq("line_bundles", "L1, L2 derived by halving", LineBundleSource::Derived, ex.data.source());
    c.attempt(
        "preimage_Delta2bar",
        "the strict transform of Delta2bar is now a -2-curve",
        json!({"shape": "irreducible", "genus": 0, "square": -2}),
        preimage_shape(&ex, "Delta2bar"),
    );
    c.attempt(
        "preimage_Delta3bar",
        "theta_1, theta_2 are disjoint -2-curves",
        json!({"shape": "irreducible", "genus": 0, "square": -2}),
        preimage_shape(&ex, "Delta3bar"),
    );
    c.attempt(
        "preimage_e7",
        "E is an elliptic curve with E^2=-1",
        json!({"shape": "irreducible", "genus": 1, "square": -1}),
        preimage_shape(&ex, "e7"),
    );
    cover_checks(&mut c, &ex, &expected(1, -2, 8, 5), anchor);
    c.attempt("P2", "P_2(S)=7", json!([6, [1, 0, 0]]), bicanonical_split(&ex, 7));
    c
}

fn numeri_checks() -> Checks {
    let mut c = Checks::default();
    let ids = numeri_identities(-4);
    c.eq("K.B0", "B0^2=-4, K_Y B0=8", 8, ids.k_b0);
    c.eq("B0^2", "B0^2=-4, K_Y B0=8", -4, ids.b0_square);
    let (h2, kh, g) = hyperplane_invariants(-4, ids);
    c.eq("H^2", "H^2=12, K_Y H=0 and so g(H)=7", 12, h2);
    c.eq("K.H", "H^2=12, K_Y H=0 and so g(H)=7", 0, kh);
    c.eq("g(H)", "H^2=12, K_Y H=0 and so g(H)=7", 7, g);
    let lat = BlowupLattice::new(13);
    let mut mults = vec![2; 8];
    mults.extend([1; 5]);
    let h = lat.class(7, &mults);
    c.eq("H_class", "a class with H^2=12, K.H=0", json!([12, 0]), json!([h.square(), h.canonical_degree()]));
    c.attempt("p_a(H_class)", "g(H)=7", 7, arithmetic_genus(&h));
    let six = BlowupLattice::new(6);
    let l = six.class(1, &[1, 1]);
    c.eq("L^2+KL", "L^2+K_Y L=-2", -2, l.square() + l.canonical_degree());
    c.eq("double_cover_chi", "L^2+K_Y L=-2 is equivalent to chi(S)=1", 1, double_cover_chi(&l));
    c.eq("double_cover_chi(0)", "trivial double cover", 2, double_cover_chi(&six.zero()));
    c.eq("etale_double", "chi(Y)=2, K^2_Y=12", (2, 12), etale_double(1, 6));
    c
}

const S1_S4: &str = include_str!("../fixtures/s1_s4.json");
const RANK14: &str = include_str!("../fixtures/rank14_ten_nodes.json");

fn codes_checks() -> Checks {
    let mut c = Checks::default();
    for s in 1..=8 {
        let code = de_code(s);
        c.eq(&format!("DE({s}).dim"), "DE(s) has dimension s-1", s - 1, code.dimension());
        c.attempt(
            &format!("DE({s}).weights_mod4"),
            "weights of DE(s) are divisible by 4",
            true,
            code.weights().map(|w| w.keys().all(|k| k % 4 == 0)),
        );
    }
    let sides: CodeFixture = serde_json::from_str(S1_S4).expect("bundled fixture");
    let v = sides.classes().and_then(code_of_classes);
    c.attempt(
        "V(S1..S4)",
        "S1+S2+S3+S4 is divisible by 2",
        vec!["1111".to_string()],
        v.map(|v| v.generators().iter().map(crate::codes::bit_string).collect()),
    );
    let ten: CodeFixture = serde_json::from_str(RANK14).expect("bundled fixture");
    let classes = ten.classes().expect("bundled fixture lattice").to_vec();
    let bound = IsotropyCheck::kernel_lower_bound(classes.len(), 14);
    c.eq("isotropy_lower_bound", "the dimension of V is at least 3", 3, bound);
    c.attempt(
        "isotropy_holds",
        "the image is a totally isotropic subspace",
        true,
        isotropy_bound_holds(&classes).map(|i| i.holds),
    );
    c.attempt(
        "dim V >= 3",
        "the dimension of V is at least 3",
        true,
        code_of_classes(&classes).map(|v| v.dimension() >= bound),
    );
    c.eq("image_dimension", "2 dim Im <= 14", 7, image_dimension(&classes));
    c
}

fn bounds_checks() -> Checks {
    let mut c = Checks::default();
    c.attempt("castelnuovo(8,5)", "by Castelnuovo's theorem", 3, castelnuovo_bound(8, 5));
    c.eq(
        "slope(12,2,3)",
        "12 = K^2_X >= 8(g(C)-1)(g(F)-1) >= 16, a contradiction",
        false,
        slope_check(12, 2, 3).holds,
    );
    let s = slope_check(24, 2, 3);
    c.eq("slope(24,2,3)", "24 = K^2_X >= 8(g(C)-1)(g(F)-1)", true, s.holds);
    c.eq("slope_margin(24,2,3)", "24 = K^2_X >= 8(g(F)-1)", 8, s.margin);
    c.eq("etale_double(1,6)", "chi(Y)=2, K^2_Y=12", (2, 12), etale_double(1, 6));
    c
}

/// Parses a cover description.
pub fn parse_document(text: &str) -> Result<CoverDocument, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
}

/// Runs the cover pipeline on a JSON file, without pinned expectations.
pub fn run_custom(path: &Path, seed: u64) -> Result<ScenarioReport, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    run_custom_document(parse_document(&text)?, &path.display().to_string(), seed)
}

pub fn run_custom_document(doc: CoverDocument, name: &str, seed: u64) -> Result<ScenarioReport, ScenarioError> {
    let choice = match doc.configuration {
        Some(choice) => choice,
        None => ConfigurationChoice::for_lattice(doc.lattice_n, seed).ok_or_else(|| {
            ScenarioError::Parse(format!("no default configuration for lattice_n = {}", doc.lattice_n))
        })?,
    };
    if choice.point_count() != doc.lattice_n {
        return Err(ScenarioError::Parse(format!(
            "configuration has {} points, lattice_n is {}",
            choice.point_count(),
            doc.lattice_n
        )));
    }
    let pencil = doc.pencil.clone();
    if let Some(p) = &pencil {
        if p.n() != doc.lattice_n {
            return Err(ScenarioError::Parse("pencil class has the wrong length".into()));
        }
    }
    let data = doc.into_data()?;
    data.validate()?;
    let cfg = choice.build();

    let mut c = Checks::default();
    c.eq("validate", "2L1 = D2 + D3 and 2L2 = D1 + D3", true, true);
    let inv = bidouble_invariants(&data, &cfg);
    let contr = contractions(&data).map(|(_, n)| n);
    let p2 = match (&inv, &contr) {
        (Ok(i), Ok(n)) => Some(i.chi + i.k2_cover + i64::from(*n)),
        _ => None,
    };
    c.attempt("invariants", "chi, K^2, p_g of the cover", true, inv.as_ref().map(|_| true).map_err(Clone::clone));
    c.attempt("contractions", "(-1)-curves over branch components", true, contr.as_ref().map(|_| true).map_err(Clone::clone));
    if let Some(p2) = p2 {
        let total = bicanonical_eigenspaces(&data, &cfg).map(|b| b.total() as i64);
        c.attempt("P2", "bicanonical eigenspaces sum to chi + K^2", p2, total);
    }
    let report = InvariantReport::compute(&data, &cfg, pencil.as_ref(), FIBRE_SEARCH_DEPTH);
    c.attempt("pipeline", "full invariant report", true, report.as_ref().map(|_| true).map_err(Clone::clone));
    if let Ok(r) = &report {
        c.eq("q>=0", "q = p_g + 1 - chi >= 0", true, r.q >= 0);
    }
    let mut out = ScenarioReport::new(name, c.0);
    out.invariants = report.ok();
    out.line_bundles = Some(data.source());
    out.fibre_search_depth = pencil.map(|_| FIBRE_SEARCH_DEPTH);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_passes() {
        for name in SCENARIOS {
            let r = run_scenario(name, 0).unwrap();
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).collect();
            assert!(failed.is_empty(), "{name}: {failed:#?}");
        }
    }

    #[test]
    fn unknown_scenario() {
        assert!(matches!(run_scenario("example4", 0), Err(ScenarioError::Unknown(_))));
    }
}
