use std::collections::BTreeMap;

use super::{expand, prefix_block, FixtureSet};
use crate::federation::{EndpointConfig, FederationConfig};

fn two_sources(
    name: &str,
    root: (&str, &str),
    other: (&str, &str),
    links: &str,
    queries: &[(&str, String)],
) -> FixtureSet {
    let config = FederationConfig {
        aggregation: "median".to_owned(),
        endpoints: [root.0, other.0]
            .iter()
            .map(|id| EndpointConfig {
                id: (*id).to_owned(),
                data: format!("{id}.nt").into(),
                available: true,
            })
            .collect(),
        links: Some("links.nt".into()),
        catalog: None,
    };
    let files = BTreeMap::from([
        (format!("{}.nt", root.0), expand(root.1)),
        (format!("{}.nt", other.0), expand(other.1)),
        ("links.nt".to_owned(), expand(links)),
    ]);
    FixtureSet {
        name: name.to_owned(),
        config,
        files,
        queries: queries.iter().map(|(n, q)| ((*n).to_owned(), q.clone())).collect(),
    }
}

/// Three films; `lmdb` holds one label each, `dbpedia` two.
pub fn hair() -> FixtureSet {
    let lmdb = r#"
        lmdb:Hair a lmdb:Film .
        lmdb:Hair lmdb:label "Hair" .
        lmdb:Amadeus a lmdb:Film .
        lmdb:Amadeus lmdb:label "Amadeus" .
        lmdb:Ragtime a lmdb:Film .
        lmdb:Ragtime lmdb:label "Ragtime" .
    "#;
    let dbpedia = r#"
        dbr:Hair a dbo:Film .
        dbr:Hair rdfs:label "Hair"@en .
        dbr:Hair rdfs:label "Hair (film)"@en .
        dbr:Hair owl:sameAs lmdb:Hair .
        dbr:Amadeus a dbo:Film .
        dbr:Amadeus rdfs:label "Amadeus"@en .
        dbr:Amadeus rdfs:label "Amadeus (film)"@en .
        dbr:Amadeus owl:sameAs lmdb:Amadeus .
        dbr:Ragtime a dbo:Film .
        dbr:Ragtime rdfs:label "Ragtime"@en .
        dbr:Ragtime rdfs:label "Ragtime (film)"@en .
        dbr:Ragtime owl:sameAs lmdb:Ragtime .
    "#;
    let links = r#"
        lmdb:Film owl:equivalentClass dbo:Film .
        lmdb:label owl:sameAs rdfs:label .
    "#;
    let q1 = format!(
        "{}SELECT ?film ?label WHERE {{\n  ?film a lmdb:Film .\n  ?film lmdb:label ?label .\n}}\n",
        prefix_block(&["lmdb"])
    );
    two_sources("hair", ("lmdb", lmdb), ("dbpedia", dbpedia), links, &[("q1", q1)])
}

fn query(prefixes: &[&str], select: &str, patterns: &[&str]) -> String {
    let mut q = prefix_block(prefixes);
    q.push_str(&format!("SELECT {select} WHERE {{\n"));
    for p in patterns {
        q.push_str(&format!("  {p} .\n"));
    }
    q.push_str("}\n");
    q
}

fn sport() -> FixtureSet {
    let dbpedia = r#"
        dbr:Lionel_Messi a dbo:SoccerPlayer .
        dbr:Lionel_Messi dbo:position dbr:Forward_(association_football) .
        dbr:Lionel_Messi dbo:birthDate "1987-06-24"^^xsd:date .
        dbr:Andres_Iniesta a dbo:SoccerPlayer .
        dbr:Andres_Iniesta dbo:position dbr:Midfielder .
        dbr:Andres_Iniesta dbo:birthDate "1984-05-11"^^xsd:date .
        dbr:Carles_Puyol a dbo:SoccerPlayer .
        dbr:Carles_Puyol dbo:position dbr:Defender_(association_football) .
        dbr:Carles_Puyol dbo:birthDate "1978-04-13"^^xsd:date .
        dbr:FC_Barcelona a dbo:SoccerClub .
        dbr:Spain_national_football_team a dbo:SoccerClub .
        dbr:Argentina_national_football_team a dbo:SoccerClub .
    "#;
    let wikidata = r#"
        wd:Q615 a wd:Q937857 .
        wd:Q615 wdt:P54 wd:Q7156 .
        wd:Q615 wdt:P54 wd:Q79800 .
        wd:Q43729 a wd:Q937857 .
        wd:Q43729 wdt:P54 wd:Q7156 .
        wd:Q43729 wdt:P54 wd:Q42267 .
        wd:Q184561 a wd:Q937857 .
        wd:Q184561 wdt:P54 wd:Q7156 .
        wd:Q184561 wdt:P54 wd:Q42267 .
        wd:Q7156 a wd:Q476028 .
        wd:Q79800 a wd:Q476028 .
        wd:Q42267 a wd:Q476028 .
    "#;
    let links = r#"
        dbo:SoccerPlayer owl:equivalentClass wd:Q937857 .
        dbo:SoccerClub owl:equivalentClass wd:Q476028 .
        dbo:team owl:equivalentProperty wdt:P54 .
        dbr:Lionel_Messi owl:sameAs wd:Q615 .
        dbr:Andres_Iniesta owl:sameAs wd:Q43729 .
        dbr:Carles_Puyol owl:sameAs wd:Q184561 .
        dbr:FC_Barcelona owl:sameAs wd:Q7156 .
        dbr:Argentina_national_football_team owl:sameAs wd:Q79800 .
        dbr:Spain_national_football_team owl:sameAs wd:Q42267 .
    "#;
    let q1 = query(
        &["dbo"],
        "?player ?position ?birth ?team",
        &[
            "?player a dbo:SoccerPlayer",
            "?player dbo:position ?position",
            "?player dbo:birthDate ?birth",
            "?player dbo:team ?team",
        ],
    );
    two_sources(
        "sport",
        ("dbpedia", dbpedia),
        ("wikidata", wikidata),
        links,
        &[("q1", q1)],
    )
}

fn movies() -> FixtureSet {
    let dbpedia = r#"
        dbr:The_Matrix a dbo:Film .
        dbr:The_Matrix dbo:director dbr:Lana_Wachowski .
        dbr:Fargo_(1996_film) a dbo:Film .
        dbr:Fargo_(1996_film) dbo:director dbr:Joel_Coen .
        dbr:Sin_City_(film) a dbo:Film .
        dbr:Sin_City_(film) dbo:director dbr:Robert_Rodriguez .
        dbr:Lana_Wachowski a dbo:Person .
        dbr:Joel_Coen a dbo:Person .
        dbr:Robert_Rodriguez a dbo:Person .
    "#;
    let wikidata = r#"
        wd:Q83495 a wd:Q11424 .
        wd:Q83495 wdt:P57 wd:Q9544977 .
        wd:Q83495 wdt:P57 wd:Q9545711 .
        wd:Q222720 a wd:Q11424 .
        wd:Q222720 wdt:P57 wd:Q13595531 .
        wd:Q222720 wdt:P57 wd:Q13595311 .
        wd:Q192115 a wd:Q11424 .
        wd:Q192115 wdt:P57 wd:Q47284 .
        wd:Q192115 wdt:P57 wd:Q353983 .
    "#;
    let links = r#"
        dbo:Film owl:equivalentClass wd:Q11424 .
        dbo:director owl:equivalentProperty wdt:P57 .
        dbr:The_Matrix owl:sameAs wd:Q83495 .
        dbr:Fargo_(1996_film) owl:sameAs wd:Q222720 .
        dbr:Sin_City_(film) owl:sameAs wd:Q192115 .
        dbr:Lana_Wachowski owl:sameAs wd:Q9544977 .
        dbr:Lilly_Wachowski owl:sameAs wd:Q9545711 .
        dbr:Joel_Coen owl:sameAs wd:Q13595531 .
        dbr:Ethan_Coen owl:sameAs wd:Q13595311 .
        dbr:Robert_Rodriguez owl:sameAs wd:Q47284 .
        dbr:Frank_Miller owl:sameAs wd:Q353983 .
    "#;
    let q2 = query(
        &["dbo"],
        "?film ?director",
        &["?film a dbo:Film", "?film dbo:director ?director"],
    );
    two_sources(
        "movies",
        ("dbpedia", dbpedia),
        ("wikidata", wikidata),
        links,
        &[("q2", q2)],
    )
}

fn culture() -> FixtureSet {
    let dbpedia = r#"
        dbr:Mona_Lisa a dbo:Painting .
        dbr:Mona_Lisa dbo:author dbr:Leonardo_da_Vinci .
        dbr:The_Last_Supper a dbo:Painting .
        dbr:The_Last_Supper dbo:author dbr:Leonardo_da_Vinci .
        dbr:The_Starry_Night a dbo:Painting .
        dbr:The_Starry_Night dbo:author dbr:Vincent_van_Gogh .
        dbr:Sunflowers_(Van_Gogh_series) a dbo:Painting .
        dbr:Sunflowers_(Van_Gogh_series) dbo:author dbr:Vincent_van_Gogh .
        dbr:Girl_with_a_Pearl_Earring a dbo:Painting .
        dbr:Girl_with_a_Pearl_Earring dbo:author dbr:Johannes_Vermeer .
        dbr:The_Night_Watch a dbo:Painting .
        dbr:The_Night_Watch dbo:author dbr:Rembrandt .
        dbr:Leonardo_da_Vinci a dbo:Artist .
        dbr:Leonardo_da_Vinci dbo:movement dbr:High_Renaissance .
        dbr:Vincent_van_Gogh a dbo:Artist .
        dbr:Vincent_van_Gogh dbo:movement dbr:Post-Impressionism .
        dbr:Johannes_Vermeer a dbo:Artist .
        dbr:Johannes_Vermeer dbo:movement dbr:Dutch_Golden_Age_painting .
        dbr:Rembrandt a dbo:Artist .
        dbr:Rembrandt dbo:movement dbr:Dutch_Golden_Age_painting .
        dbr:Albert_Einstein a dbo:Person .
        dbr:Albert_Einstein dbo:birthPlace dbr:Ulm .
    "#;
    let wikidata = r#"
        wd:Q762 a wd:Q483501 .
        wd:Q762 wdt:P19 wd:Q82884 .
        wd:Q5582 a wd:Q483501 .
        wd:Q5582 wdt:P19 wd:Q9920 .
        wd:Q41264 a wd:Q483501 .
        wd:Q41264 wdt:P19 wd:Q690 .
        wd:Q5598 a wd:Q483501 .
        wd:Q5598 wdt:P19 wd:Q43631 .
    "#;
    let links = r#"
        dbo:Artist owl:equivalentClass wd:Q483501 .
        dbo:birthPlace owl:equivalentProperty wdt:P19 .
        dbr:Leonardo_da_Vinci owl:sameAs wd:Q762 .
        dbr:Vincent_van_Gogh owl:sameAs wd:Q5582 .
        dbr:Johannes_Vermeer owl:sameAs wd:Q41264 .
        dbr:Rembrandt owl:sameAs wd:Q5598 .
        dbr:Vinci,_Tuscany owl:sameAs wd:Q82884 .
        dbr:Zundert owl:sameAs wd:Q9920 .
        dbr:Delft owl:sameAs wd:Q690 .
        dbr:Leiden owl:sameAs wd:Q43631 .
    "#;
    let q3 = query(
        &["dbo"],
        "?painting ?artist ?place",
        &[
            "?painting a dbo:Painting",
            "?painting dbo:author ?artist",
            "?artist a dbo:Artist",
            "?artist dbo:birthPlace ?place",
        ],
    );
    two_sources(
        "culture",
        ("dbpedia", dbpedia),
        ("wikidata", wikidata),
        links,
        &[("q3", q3)],
    )
}

fn drugs() -> FixtureSet {
    let dbpedia = r#"
        dbr:Aspirin a dbo:Drug .
        dbr:Aspirin dbo:casNumber "50-78-2" .
        dbr:Ibuprofen a dbo:Drug .
        dbr:Ibuprofen dbo:casNumber "15687-27-1" .
        dbr:Imatinib a dbo:Drug .
        dbr:Imatinib dbo:casNumber "152459-95-5" .
        dbr:Metformin a dbo:Drug .
        dbr:Metformin dbo:casNumber "657-24-9" .
    "#;
    let wikidata = r#"
        wd:Q18216 a wd:Q12140 .
        wd:Q18216 wdt:P129 wd:Q21118330 .
        wd:Q18216 wdt:P129 wd:Q21118320 .
        wd:Q186969 a wd:Q12140 .
        wd:Q186969 wdt:P129 wd:Q21118330 .
        wd:Q186969 wdt:P129 wd:Q21118320 .
        wd:Q177094 a wd:Q12140 .
        wd:Q177094 wdt:P129 wd:Q14914364 .
        wd:Q177094 wdt:P129 wd:Q14914368 .
        wd:Q177094 wdt:P129 wd:Q14865053 .
        wd:Q19484 a wd:Q12140 .
        wd:Q19484 wdt:P129 wd:Q14904850 .
    "#;
    let links = r#"
        dbo:Drug owl:equivalentClass wd:Q12140 .
        dbo:target owl:equivalentProperty wdt:P129 .
        dbr:Aspirin owl:sameAs wd:Q18216 .
        dbr:Ibuprofen owl:sameAs wd:Q186969 .
        dbr:Imatinib owl:sameAs wd:Q177094 .
        dbr:Metformin owl:sameAs wd:Q19484 .
    "#;
    let q4 = query(
        &["dbo"],
        "?drug ?target",
        &["?drug a dbo:Drug", "?drug dbo:target ?target"],
    );
    two_sources(
        "drugs",
        ("dbpedia", dbpedia),
        ("wikidata", wikidata),
        links,
        &[("q4", q4)],
    )
}

fn lifesci() -> FixtureSet {
    let dbpedia = r#"
        dbr:Influenza a dbo:Disease .
        dbr:Influenza dbo:icd10 "J11" .
        dbr:Common_cold a dbo:Disease .
        dbr:Common_cold dbo:symptom dbr:Cough .
        dbr:Common_cold dbo:symptom dbr:Sore_throat .
        dbr:Common_cold dbo:symptom dbr:Rhinorrhea .
        dbr:Measles a dbo:Disease .
        dbr:Measles dbo:symptom dbr:Fever .
        dbr:Measles dbo:symptom dbr:Rash .
    "#;
    let wikidata = r#"
        wd:Q2840 a wd:Q12136 .
        wd:Q2840 wdt:P780 wd:Q38933 .
        wd:Q2840 wdt:P780 wd:Q35805 .
        wd:Q2840 wdt:P780 wd:Q474959 .
        wd:Q2840 wdt:P780 wd:Q86 .
        wd:Q2840 wdt:P780 wd:Q9690 .
        wd:Q2840 wdt:P780 wd:Q1004461 .
        wd:Q2840 wdt:P780 wd:Q3160 .
        wd:Q2840 wdt:P780 wd:Q188008 .
        wd:Q2840 wdt:P780 wd:Q178061 .
        wd:Q79793 a wd:Q12136 .
        wd:Q79793 wdt:P780 wd:Q38933 .
        wd:Q79793 wdt:P780 wd:Q1985614 .
    "#;
    let links = r#"
        dbo:Disease owl:equivalentClass wd:Q12136 .
        dbo:symptom owl:equivalentProperty wdt:P780 .
        dbr:Influenza owl:sameAs wd:Q2840 .
        dbr:Measles owl:sameAs wd:Q79793 .
        dbr:Fever owl:sameAs wd:Q38933 .
        dbr:Rash owl:sameAs wd:Q1985614 .
        dbr:Cough owl:sameAs wd:Q35805 .
        dbr:Sore_throat owl:sameAs wd:Q474959 .
        dbr:Headache owl:sameAs wd:Q86 .
        dbr:Fatigue owl:sameAs wd:Q9690 .
        dbr:Myalgia owl:sameAs wd:Q1004461 .
        dbr:Rhinorrhea owl:sameAs wd:Q3160 .
        dbr:Vomiting owl:sameAs wd:Q188008 .
        dbr:Diarrhea owl:sameAs wd:Q178061 .
    "#;
    let q5 = query(
        &["dbo", "dbr"],
        "?symptom",
        &["dbr:Influenza a dbo:Disease", "dbr:Influenza dbo:symptom ?symptom"],
    );
    two_sources(
        "lifesci",
        ("dbpedia", dbpedia),
        ("wikidata", wikidata),
        links,
        &[("q5", q5)],
    )
}

/// The five domain federations, in table order.
pub fn domains() -> Vec<FixtureSet> {
    vec![sport(), movies(), culture(), drugs(), lifesci()]
}
