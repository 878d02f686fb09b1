//! Instance documents (JSON) and their conversion to validated data.
//!
//! Group instances index H by pairs: (g, q) -> g * |Q| + q. Scalars are
//! written either as {"re": x, "im": y} or {"turns": "p/q"} (exp(2 pi i p/q));
//! documents keep whichever form they were written in.

use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle2;
use crate::error::{Error, Result};
use crate::extension::{ExtensionSpec, TwistedExtension};
use crate::gpd_extension::{validate_groupoid_extension, GroupoidExtensionSpec};
use crate::group::FiniteGroup;
use crate::groupoid::FiniteGroupoid;
use crate::scalar::{snap_to_turns, turns, C64};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Turns { turns: String },
    Cartesian { re: f64, im: f64 },
}

impl Scalar {
    pub fn value(&self) -> Result<C64> {
        match self {
            Scalar::Cartesian { re, im } => Ok(C64::new(*re, *im)),
            Scalar::Turns { turns: s } => {
                let bad = || Error::Parse(format!("invalid turns value {s:?}, expected \"p/q\""));
                let (p, q) = match s.split_once('/') {
                    Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
                    None => (s.trim().parse().map_err(|_| bad())?, 1),
                };
                if q <= 0 {
                    return Err(bad());
                }
                Ok(turns(p, q))
            }
        }
    }

    /// Exact form when the value is a root of unity of order at most 24.
    pub fn from_value(z: C64) -> Self {
        match snap_to_turns(z, 24, 1e-12) {
            Some((p, q)) if (turns(p, q) - z).norm() <= 1e-12 => Scalar::Turns { turns: format!("{p}/{q}") },
            _ => Scalar::Cartesian { re: z.re, im: z.im },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Group(GroupInstance),
    Groupoid(GroupoidInstance),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInstance {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// multiplication table of G
    pub g: Vec<Vec<usize>>,
    pub q: Vec<Vec<usize>>,
    /// rho[q][g]
    pub rho: Vec<Vec<usize>>,
    /// tau[q1][q2], an element of G
    pub tau: Vec<Vec<usize>>,
    /// t[h1][h2] on H
    pub t: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdEntry {
    pub map: Vec<usize>,
    pub nu: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaubarEntry {
    pub g: usize,
    pub z: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidInstance {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub objects: usize,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// composition[a][b] = ab, null when t(a) != s(b)
    pub composition: Vec<Vec<Option<usize>>>,
    pub g: Vec<Vec<usize>>,
    /// one cocycle table on G per object
    pub t: Vec<Vec<Vec<Scalar>>>,
    /// Ad per arrow, from the fiber at its target to the fiber at its source
    pub ad: Vec<AdEntry>,
    /// taubar[q1][q2], null unless composable
    pub taubar: Vec<Vec<Option<TaubarEntry>>>,
}

/// Parses a document; syntax and schema errors carry line and column.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let doc: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let version = match &doc {
        InstanceFile::Group(g) => g.version,
        InstanceFile::Groupoid(g) => g.version,
    };
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {version}, expected {FORMAT_VERSION}")));
    }
    Ok(doc)
}

pub fn to_json(doc: &InstanceFile) -> String {
    serde_json::to_string_pretty(doc).expect("instances serialize")
}

fn check_square(what: &str, rows: &[Vec<Scalar>], n: usize) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{what} must be a {n} x {n} table")));
    }
    Ok(())
}

fn check_indices(what: &str, rows: &[Vec<usize>], len: usize, bound: usize) -> Result<()> {
    if rows.len() != len {
        return Err(Error::Parse(format!("{what} must have {len} rows")));
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some((j, v)) = row.iter().enumerate().find(|(_, &v)| v >= bound) {
            return Err(Error::Parse(format!("{what}[{i}][{j}] = {v} is out of range (< {bound})")));
        }
    }
    Ok(())
}

fn table_values(rows: &[Vec<Scalar>]) -> Result<Cocycle2> {
    let values = rows.iter().flatten().map(Scalar::value).collect::<Result<Vec<_>>>()?;
    Cocycle2::from_values(rows.len(), values)
}

fn scalar_rows(c: &Cocycle2) -> Vec<Vec<Scalar>> {
    (0..c.size()).map(|a| (0..c.size()).map(|b| Scalar::from_value(c.get(a, b))).collect()).collect()
}

impl GroupInstance {
    /// Group data and cocycle table, checked for shape but not for the cocycle identity.
    pub fn parts(&self) -> Result<(ExtensionSpec, Cocycle2)> {
        let g = FiniteGroup::from_table(&self.g)?;
        let q = FiniteGroup::from_table(&self.q)?;
        check_indices("rho", &self.rho, q.order(), g.order())?;
        check_indices("tau", &self.tau, q.order(), g.order())?;
        if self.rho.iter().any(|r| r.len() != g.order()) || self.tau.iter().any(|r| r.len() != q.order()) {
            return Err(Error::Parse("rho rows need |G| entries and tau rows |Q| entries".into()));
        }
        let n = g.order() * q.order();
        check_square("t", &self.t, n)?;
        let spec = ExtensionSpec { g, q, rho: self.rho.clone(), tau: self.tau.concat() };
        Ok((spec, table_values(&self.t)?))
    }

    pub fn to_extension(&self, tol: f64) -> Result<TwistedExtension> {
        let (spec, t) = self.parts()?;
        TwistedExtension::new(spec, t, tol)
    }

    pub fn from_extension(ext: &TwistedExtension, name: Option<&str>) -> Self {
        let nq = ext.spec.q.order();
        GroupInstance {
            version: FORMAT_VERSION,
            name: name.map(str::to_owned),
            g: ext.spec.g.table(),
            q: ext.spec.q.table(),
            rho: ext.spec.rho.clone(),
            tau: ext.spec.tau.chunks(nq).map(<[usize]>::to_vec).collect(),
            t: scalar_rows(&ext.t),
        }
    }
}

impl GroupoidInstance {
    pub fn to_spec(&self, tol: f64) -> Result<GroupoidExtensionSpec> {
        let n = self.source.len();
        if self.target.len() != n || self.composition.len() != n || self.composition.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("source, target and composition must describe {n} arrows")));
        }
        let base = FiniteGroupoid::new(self.objects, self.source.clone(), self.target.clone(), &self.composition)?;
        let g = FiniteGroup::from_table(&self.g)?;
        let ng = g.order();
        if self.t.len() != self.objects {
            return Err(Error::Parse(format!("t needs one table per object ({})", self.objects)));
        }
        let mut t_obj = Vec::with_capacity(self.objects);
        for (x, rows) in self.t.iter().enumerate() {
            check_square(&format!("t[{x}]"), rows, ng)?;
            t_obj.push(table_values(rows)?);
        }
        if self.ad.len() != n {
            return Err(Error::Parse(format!("ad needs one entry per arrow ({n})")));
        }
        let maps: Vec<Vec<usize>> = self.ad.iter().map(|a| a.map.clone()).collect();
        check_indices("ad.map", &maps, n, ng)?;
        if self.ad.iter().any(|a| a.map.len() != ng || a.nu.len() != ng) {
            return Err(Error::Parse(format!("every ad entry needs {ng} map and nu values")));
        }
        let ad_nu = self.ad.iter().map(|a| a.nu.iter().map(Scalar::value).collect()).collect::<Result<Vec<_>>>()?;
        if self.taubar.len() != n || self.taubar.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("taubar must be a {n} x {n} table")));
        }
        let mut taubar = Vec::with_capacity(n * n);
        for (a, row) in self.taubar.iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                let composable = base.compose(a, b).is_some();
                taubar.push(match (entry, composable) {
                    (Some(e), true) if e.g < ng => (e.z.value()?, e.g),
                    (None, false) => (C64::new(1.0, 0.0), g.identity()),
                    (Some(_), true) => return Err(Error::Parse(format!("taubar[{a}][{b}].g is out of range"))),
                    (None, true) => return Err(Error::Parse(format!("taubar[{a}][{b}] missing for a composable pair"))),
                    (Some(_), false) => return Err(Error::Parse(format!("taubar[{a}][{b}] given for a non-composable pair"))),
                });
            }
        }
        let spec = GroupoidExtensionSpec { base, g, t_obj, ad_map: maps, ad_nu, taubar };
        validate_groupoid_extension(&spec, tol)?;
        Ok(spec)
    }

    pub fn from_spec(spec: &GroupoidExtensionSpec, name: Option<&str>) -> Self {
        let n = spec.n_arrows();
        GroupoidInstance {
            version: FORMAT_VERSION,
            name: name.map(str::to_owned),
            objects: spec.base.n_obj(),
            source: (0..n).map(|a| spec.base.src(a)).collect(),
            target: (0..n).map(|a| spec.base.tgt(a)).collect(),
            composition: spec.base.composition_table(),
            g: spec.g.table(),
            t: spec.t_obj.iter().map(scalar_rows).collect(),
            ad: (0..n)
                .map(|q| AdEntry {
                    map: spec.ad_map[q].clone(),
                    nu: spec.ad_nu[q].iter().map(|&z| Scalar::from_value(z)).collect(),
                })
                .collect(),
            taubar: (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            spec.base.compose(a, b).map(|_| {
                                let (z, g) = spec.taubar(a, b);
                                TaubarEntry { g, z: Scalar::from_value(z) }
                            })
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn group_round_trip() {
        let ext = fixtures::klein_swap();
        let doc = InstanceFile::Group(GroupInstance::from_extension(&ext, Some("klein_swap")));
        let text = to_json(&doc);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, doc);
        let InstanceFile::Group(g) = back else { panic!() };
        assert_eq!(g.to_extension(1e-9).unwrap().t, ext.t);
    }

    #[test]
    fn groupoid_round_trip() {
        let spec = fixtures::pair_groupoid_z2(1).unwrap();
        let doc = InstanceFile::Groupoid(GroupoidInstance::from_spec(&spec, None));
        let back = parse_instance(&to_json(&doc)).unwrap();
        assert_eq!(back, doc);
        let InstanceFile::Groupoid(g) = back else { panic!() };
        let again = g.to_spec(1e-9).unwrap();
        assert_eq!(again.base, spec.base);
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = parse_instance("{\n  \"kind\": \"group\",\n  \"version\": 1,\n  \"g\": [[0]\n").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.starts_with("line ")), "{err}");
    }

    #[test]
    fn scalar_forms() {
        let t: Scalar = serde_json::from_str(r#"{"turns": "1/4"}"#).unwrap();
        assert_eq!(t.value().unwrap(), C64::new(0.0, 1.0));
        let c: Scalar = serde_json::from_str(r#"{"re": 0.6, "im": 0.8}"#).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"re":0.6,"im":0.8}"#);
    }
}
