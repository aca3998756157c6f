use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{
    AggregationFn, Amd, ClassLink, DtpEntry, EndpointId, MoleculeTemplate, MtCatalog, ProfileError, PropertyLink,
};
use crate::rdf::Iri;

// Field order is alphabetical so the output has sorted keys.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MtJson {
    agg: String,
    class: String,
    dtp: Vec<DtpJson>,
    endpoint: String,
    #[serde(rename = "interC")]
    inter_c: Vec<(String, String, String)>,
    #[serde(rename = "interP")]
    inter_p: Vec<(String, String, String)>,
    #[serde(rename = "intraC")]
    intra_c: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DtpJson {
    amd: Amd,
    p: String,
    t: String,
}

impl Serialize for Amd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            serializer.serialize_u64(*self.0.numer())
        } else {
            serializer.collect_str(self)
        }
    }
}

impl<'de> Deserialize<'de> for Amd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct AmdVisitor;

        impl Visitor<'_> for AmdVisitor {
            type Value = Amd;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-negative integer or a \"n/d\" string")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Amd, E> {
                Ok(Amd::from_integer(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Amd, E> {
                u64::try_from(v)
                    .map(Amd::from_integer)
                    .map_err(|_| E::custom("negative multiplicity"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Amd, E> {
                let parse = |s: &str| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| E::custom(format!("bad multiplicity {v:?}")))
                };
                match v.split_once('/') {
                    Some((n, d)) => Amd::new(parse(n)?, parse(d)?).ok_or_else(|| E::custom("zero denominator")),
                    None => parse(v).map(Amd::from_integer),
                }
            }
        }

        deserializer.deserialize_any(AmdVisitor)
    }
}

fn iri(s: String) -> Result<Iri, ProfileError> {
    Iri::new(&s).map_err(|e| ProfileError::InvalidCatalog(format!("{s:?}: {e}")))
}

impl MtCatalog {
    /// Pretty JSON array in (endpoint, class) order, newline terminated.
    pub fn to_json(&self) -> String {
        let entries: Vec<MtJson> = self
            .iter()
            .map(|mt| MtJson {
                agg: mt.aggregation.name().to_owned(),
                class: mt.class.as_str().to_owned(),
                dtp: mt
                    .dtp
                    .iter()
                    .map(|e| DtpJson {
                        amd: e.amd,
                        p: e.predicate.as_str().to_owned(),
                        t: e.range_type.as_str().to_owned(),
                    })
                    .collect(),
                endpoint: mt.endpoint.as_str().to_owned(),
                inter_c: mt
                    .inter_class
                    .iter()
                    .map(|l| {
                        (
                            l.predicate.as_str().to_owned(),
                            l.class.as_str().to_owned(),
                            l.endpoint.as_str().to_owned(),
                        )
                    })
                    .collect(),
                inter_p: mt
                    .inter_property
                    .iter()
                    .map(|l| {
                        (
                            l.predicate.as_str().to_owned(),
                            l.foreign.as_str().to_owned(),
                            l.endpoint.as_str().to_owned(),
                        )
                    })
                    .collect(),
                intra_c: mt
                    .intra_class
                    .iter()
                    .map(|(p, c)| (p.as_str().to_owned(), c.as_str().to_owned()))
                    .collect(),
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&entries).expect("catalog serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let entries: Vec<MtJson> = serde_json::from_str(text)?;
        let mut catalog = MtCatalog::new();
        for e in entries {
            let endpoint = EndpointId::new(&e.endpoint)?;
            let mut mt = MoleculeTemplate::new(endpoint.clone(), iri(e.class)?, e.agg.parse::<AggregationFn>()?);
            for d in e.dtp {
                mt.insert_dtp(DtpEntry {
                    predicate: iri(d.p)?,
                    range_type: iri(d.t)?,
                    amd: d.amd,
                })?;
            }
            for (p, c) in e.intra_c {
                mt.insert_intra_class(iri(p)?, iri(c)?);
            }
            for (p, c, w) in e.inter_c {
                mt.insert_class_link(ClassLink {
                    predicate: iri(p)?,
                    class: iri(c)?,
                    endpoint: EndpointId::new(&w)?,
                })?;
            }
            for (p, q, w) in e.inter_p {
                mt.insert_property_link(PropertyLink {
                    predicate: iri(p)?,
                    foreign: iri(q)?,
                    endpoint: EndpointId::new(&w)?,
                })?;
            }
            let key = mt.key();
            if catalog.insert(mt).is_some() {
                return Err(ProfileError::InvalidCatalog(format!("duplicate template {key}")));
            }
        }
        Ok(catalog)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> MtCatalog {
        let ep = EndpointId::new("A").unwrap();
        let mut mt = MoleculeTemplate::new(ep, Iri::new("http://x/C").unwrap(), AggregationFn::Mean);
        mt.insert_dtp(DtpEntry {
            predicate: Iri::new("http://x/p").unwrap(),
            range_type: Iri::new("http://x/T").unwrap(),
            amd: Amd::new(5, 3).unwrap(),
        })
        .unwrap();
        mt.insert_dtp(DtpEntry {
            predicate: Iri::new("http://x/q").unwrap(),
            range_type: Iri::new("http://x/T").unwrap(),
            amd: Amd::from_integer(2),
        })
        .unwrap();
        mt.insert_property_link(PropertyLink {
            predicate: Iri::new("http://x/p").unwrap(),
            foreign: Iri::new("http://y/p").unwrap(),
            endpoint: EndpointId::new("B").unwrap(),
        })
        .unwrap();
        [mt].into_iter().collect()
    }

    #[test]
    fn empty_catalog_is_empty_array() {
        assert_eq!(MtCatalog::new().to_json(), "[]\n");
    }

    #[test]
    fn keys_are_sorted_and_amd_forms_differ() {
        let json = sample().to_json();
        let keys: Vec<usize> = [
            "\"agg\"",
            "\"class\"",
            "\"dtp\"",
            "\"endpoint\"",
            "\"interC\"",
            "\"interP\"",
            "\"intraC\"",
        ]
        .iter()
        .map(|k| json.find(k).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"amd\": \"5/3\""));
        assert!(json.contains("\"amd\": 2"));
    }

    #[test]
    fn round_trip() {
        let c = sample();
        assert_eq!(MtCatalog::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MtCatalog::from_json("{}").is_err());
        assert!(MtCatalog::from_json(
            r#"[{"agg":"mode","class":"c","dtp":[],"endpoint":"A","interC":[],"interP":[],"intraC":[]}]"#
        )
        .is_err());
        assert!(MtCatalog::from_json(r#"[{"agg":"max","class":"c","dtp":[{"amd":"1/0","p":"p","t":"t"}],"endpoint":"A","interC":[],"interP":[],"intraC":[]}]"#).is_err());
    }

    proptest! {
        #[test]
        fn amd_serde_round_trip(n in 0..1000u64, d in 1..50u64) {
            let amd = Amd::new(n, d).unwrap();
            let text = serde_json::to_string(&amd).unwrap();
            prop_assert_eq!(serde_json::from_str::<Amd>(&text).unwrap(), amd);
        }
    }
}
