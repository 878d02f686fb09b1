//! Machine-readable reports and their text rendering.

use std::fmt::Write;

use serde::Serialize;

use crate::io::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Every verdict carries the number or witness it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub certificate: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointOut {
    pub index: usize,
    pub object: usize,
    pub class: usize,
    pub dim: usize,
    pub character: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionOut {
    pub point: usize,
    pub arrow: usize,
    pub image: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleOut {
    pub point: usize,
    pub q1: usize,
    pub q2: usize,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitOut {
    pub points: Vec<usize>,
    pub basepoint: usize,
    /// base arrows fixing the basepoint
    pub isotropy: Vec<usize>,
    /// c restricted to the isotropy group, indexed like `isotropy`
    pub isotropy_cocycle: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualOut {
    pub points: Vec<PointOut>,
    pub action: Vec<ActionOut>,
    pub c: Vec<CocycleOut>,
    pub orbits: Vec<OrbitOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantsOut {
    pub blocks_extension: Vec<usize>,
    pub blocks_dual: Vec<usize>,
    pub center_extension: usize,
    pub center_dual: usize,
    pub orbit_blocks: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: String,
    pub instance_digest: String,
    pub seed: u64,
    pub tol: f64,
    pub stages: Vec<Stage>,
    pub verdicts: Vec<Verdict>,
    pub residuals: Vec<Residual>,
    pub timings: Vec<Timing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsOut>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.ok) && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&mut self, name: &str, pass: bool, certificate: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), pass, certificate: certificate.into() });
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push(Residual { name: name.into(), value });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} (sha256 {})", self.command, self.instance, self.instance_digest);
        let _ = writeln!(s, "seed {}  tol {:e}", self.seed, self.tol);
        for st in &self.stages {
            match &st.error {
                Some(e) => {
                    let _ = writeln!(s, "stage {:<12} FAILED: {e}", st.name);
                }
                None => {
                    let _ = writeln!(s, "stage {:<12} ok", st.name);
                }
            }
        }
        if let Some(d) = &self.dual {
            let _ = writeln!(s, "dual: {} points", d.points.len());
            for p in &d.points {
                let _ = writeln!(s, "  point {} over object {} (class {}), dim {}", p.index, p.object, p.class, p.dim);
            }
            for (i, o) in d.orbits.iter().enumerate() {
                let _ = writeln!(s, "  orbit {i}: points {:?}, isotropy arrows {:?}", o.points, o.isotropy);
            }
            let _ = writeln!(s, "  c: {} values on composable pairs", d.c.len());
        }
        if let Some(inv) = &self.invariants {
            let _ = writeln!(s, "blocks (extension side): {:?}", inv.blocks_extension);
            let _ = writeln!(s, "blocks (dual side):      {:?}", inv.blocks_dual);
            let _ = writeln!(s, "center dims: {} / {}", inv.center_extension, inv.center_dual);
            let _ = writeln!(s, "per-orbit blocks (orbit algebra, isotropy algebra): {:?}", inv.orbit_blocks);
        }
        for r in &self.residuals {
            let _ = writeln!(s, "residual {:<32} {:e}", r.name, r.value);
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "{} {:<32} {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.certificate);
        }
        for t in &self.timings {
            let _ = writeln!(s, "time {:<12} {:.2} ms", t.stage, t.ms);
        }
        let _ = writeln!(s, "{}", if self.passed() { "result: pass" } else { "result: FAIL" });
        s
    }
}
