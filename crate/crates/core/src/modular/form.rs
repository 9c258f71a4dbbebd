use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use super::{eta_quotient, EtaQuotientSpec, ModularError, QSeries};

/// Largest truncation reached when extending a series on demand.
pub const TRUNCATION_CAP: usize = 1 << 20;
const INITIAL_TRUNCATION: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupLabel {
    #[serde(rename = "Gamma0")]
    Gamma0,
    #[serde(rename = "Gamma1")]
    Gamma1,
    #[serde(rename = "Gamma")]
    Gamma,
}

/// Coefficients read from a text table, indexed by `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientTable(BTreeMap<usize, BigInt>);

impl CoefficientTable {
    /// Parses one `k b_k` pair per line with strictly ascending `k`. Blank
    /// lines and text after `#` are ignored. Indices may skip; skipped
    /// coefficients are unknown rather than zero.
    pub fn parse(text: &str) -> Result<CoefficientTable, ModularError> {
        let mut map = BTreeMap::new();
        let mut last: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |why: &str| ModularError::CoefficientFile {
                line: i + 1,
                reason: why.to_string(),
            };
            let mut fields = line.split_whitespace();
            let (Some(k), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad("expected two fields"));
            };
            let k: usize = k.parse().map_err(|_| bad("bad index"))?;
            let b: BigInt = b.parse().map_err(|_| bad("bad coefficient"))?;
            if last.is_some_and(|l| k <= l) {
                return Err(bad("indices must be strictly ascending"));
            }
            last = Some(k);
            map.insert(k, b);
        }
        Ok(CoefficientTable(map))
    }

    pub fn get(&self, k: usize) -> Option<&BigInt> {
        self.0.get(&k)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

/// Renders `k b_k` lines for `k = 1..=N`, preceded by `0 b_0` when the
/// constant term is nonzero.
pub fn format_coefficients(series: &QSeries) -> String {
    let mut out = String::new();
    for (k, c) in series.coeffs().iter().enumerate() {
        if k == 0 && c == &BigInt::from(0) {
            continue;
        }
        let _ = writeln!(out, "{k} {c}");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSource {
    Eta(EtaQuotientSpec),
    Table(CoefficientTable),
}

/// A candidate newform: metadata, a coefficient source, and a prefix
/// `b_1, b_2, …` its coefficients must reproduce before use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformSpec {
    pub name: String,
    pub weight: u32,
    pub level: u64,
    pub group: GroupLabel,
    pub source: FormSource,
    pub anchor: Vec<i64>,
}

pub const FORM_NAMES: [&str; 3] = ["w4-level6", "w3-level16", "w3-level8"];

fn sparse_anchor(len: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; len];
    for &(k, b) in terms {
        v[k - 1] = b;
    }
    v
}

/// The three forms used for the double octic and the two K3 surfaces.
pub fn builtin_form(name: &str) -> Option<NewformSpec> {
    let eta = |s: &str| FormSource::Eta(EtaQuotientSpec::parse(s).expect("valid builtin eta spec"));
    let spec = match name {
        "w4-level6" => NewformSpec {
            name: name.into(),
            weight: 4,
            level: 6,
            group: GroupLabel::Gamma0,
            source: eta("1:2,2:2,3:2,6:2"),
            anchor: vec![1, -2, -3, 4, 6, 6, -16, -8, 9, -12, 12],
        },
        "w3-level16" => NewformSpec {
            name: name.into(),
            weight: 3,
            level: 16,
            group: GroupLabel::Gamma1,
            source: eta("4:6"),
            anchor: sparse_anchor(
                40,
                &[
                    (1, 1),
                    (5, -6),
                    (9, 9),
                    (13, 10),
                    (17, -30),
                    (25, 11),
                    (29, 42),
                    (37, -70),
                ],
            ),
        },
        "w3-level8" => NewformSpec {
            name: name.into(),
            weight: 3,
            level: 8,
            group: GroupLabel::Gamma1,
            source: eta("1:2,2:1,4:1,8:2"),
            anchor: vec![1, -2, -2, 4, 0, 4, 0, -8, -5, 0, 14, -8, 0],
        },
        _ => return None,
    };
    Some(spec)
}

impl NewformSpec {
    /// Coefficients `b_0..=b_n`; `None` where a table has no entry.
    fn generate(&self, n: usize) -> Vec<Option<BigInt>> {
        match &self.source {
            FormSource::Eta(spec) => eta_quotient(spec, n).coeffs().iter().cloned().map(Some).collect(),
            FormSource::Table(t) => (0..=n).map(|k| t.get(k).cloned()).collect(),
        }
    }

    /// Checks the source against the anchored prefix.
    pub fn validate(&self) -> Result<(), ModularError> {
        let generated = self.generate(self.anchor.len());
        for (i, &want) in self.anchor.iter().enumerate() {
            let k = i + 1;
            if generated[k] != Some(BigInt::from(want)) {
                return Err(ModularError::AnchorMismatch {
                    form: self.name.clone(),
                    index: k,
                    expected: want,
                    got: generated[k].as_ref().map(BigInt::to_string),
                });
            }
        }
        Ok(())
    }

    /// Validated coefficients through at least `q^needed`. Eta sources
    /// double their truncation from 64 until it covers `needed`, up to
    /// [`TRUNCATION_CAP`].
    pub fn coefficients(&self, needed: usize) -> Result<Vec<Option<BigInt>>, ModularError> {
        self.validate()?;
        let n = match &self.source {
            FormSource::Eta(_) => {
                let mut n = INITIAL_TRUNCATION.max(self.anchor.len());
                while n < needed {
                    n *= 2;
                }
                if n > TRUNCATION_CAP {
                    return Err(ModularError::TruncationShortfall {
                        needed,
                        cap: TRUNCATION_CAP,
                    });
                }
                n
            }
            FormSource::Table(_) => needed.max(self.anchor.len()),
        };
        Ok(self.generate(n))
    }
}

/// `b_p` for each requested prime.
pub fn prime_coeffs(form: &NewformSpec, primes: &[u64]) -> Result<BTreeMap<u64, BigInt>, ModularError> {
    let needed = primes.iter().copied().max().unwrap_or(0) as usize;
    let coeffs = form.coefficients(needed)?;
    primes
        .iter()
        .map(|&p| {
            coeffs[p as usize]
                .clone()
                .map(|b| (p, b))
                .ok_or(ModularError::MissingCoefficient {
                    form: form.name.clone(),
                    index: p as usize,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_forms_pass_their_gates() {
        for name in FORM_NAMES {
            builtin_form(name).unwrap().validate().unwrap();
        }
        assert!(builtin_form("nope").is_none());
    }

    #[test]
    fn prime_coefficients() {
        let f = builtin_form("w4-level6").unwrap();
        let b = prime_coeffs(&f, &[2, 5, 7, 11]).unwrap();
        let got: Vec<i64> = b.values().map(|v| v.try_into().unwrap()).collect();
        assert_eq!(got, [-2, 6, -16, 12]);
        let g = builtin_form("w3-level16").unwrap();
        assert_eq!(prime_coeffs(&g, &[3]).unwrap()[&3], BigInt::from(0));
    }

    #[test]
    fn extension_and_cap() {
        let f = builtin_form("w3-level16").unwrap();
        assert_eq!(f.coefficients(200).unwrap().len(), 257);
        assert_eq!(
            f.coefficients(TRUNCATION_CAP + 1),
            Err(ModularError::TruncationShortfall {
                needed: TRUNCATION_CAP + 1,
                cap: TRUNCATION_CAP
            })
        );
    }

    #[test]
    fn corrupted_anchor_is_rejected() {
        let mut f = builtin_form("w4-level6").unwrap();
        f.anchor[6] = 16;
        let err = f.validate().unwrap_err();
        assert_eq!(
            err,
            ModularError::AnchorMismatch {
                form: "w4-level6".into(),
                index: 7,
                expected: 16,
                got: Some("-16".into()),
            }
        );
        assert!(prime_coeffs(&f, &[5]).is_err());
    }

    #[test]
    fn table_source() {
        let text = "# level 6\n1 1\n2 -2\n3 -3  # trailing\n\n4 4\n5 6\n7 -16\n";
        let t = CoefficientTable::parse(text).unwrap();
        assert_eq!(t.max_index(), Some(7));
        let f = NewformSpec {
            name: "file".into(),
            weight: 4,
            level: 6,
            group: GroupLabel::Gamma0,
            source: FormSource::Table(t),
            anchor: vec![1, -2, -3, 4],
        };
        let b = prime_coeffs(&f, &[5, 7]).unwrap();
        assert_eq!(b[&7], BigInt::from(-16));
        assert!(matches!(
            prime_coeffs(&f, &[11]),
            Err(ModularError::MissingCoefficient { index: 11, .. })
        ));
        assert!(matches!(
            prime_coeffs(&f, &[6]).unwrap_err(),
            ModularError::MissingCoefficient { index: 6, .. }
        ));
    }

    #[test]
    fn table_errors() {
        assert!(CoefficientTable::parse("2 1\n1 1\n").is_err());
        assert!(CoefficientTable::parse("1\n").is_err());
        assert!(CoefficientTable::parse("1 x\n").is_err());
        let err = CoefficientTable::parse("1 1\n1 2 3\n").unwrap_err();
        assert!(matches!(err, ModularError::CoefficientFile { line: 2, .. }));
    }

    #[test]
    fn formatted_series_round_trips() {
        let s = eta_quotient(&EtaQuotientSpec::parse("4:6").unwrap(), 9);
        let text = format_coefficients(&s);
        assert_eq!(text.lines().next(), Some("1 1"));
        assert_eq!(text.lines().count(), 9);
        let t = CoefficientTable::parse(&text).unwrap();
        assert_eq!(t.get(5), Some(&BigInt::from(-6)));
    }
}
