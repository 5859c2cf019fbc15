use dsi_core::catalog::Catalog;
use dsi_core::dsbk::{
    build_library, builtin_domain, builtin_manifest_text, parse_manifest, Directive, DsbkError,
    BUILTIN_DOMAINS,
};

const DOMAIN_TEMPLATE: &str = "# {d} functions on top of the freetext library.
domain {d}
include group:{d}
include group:default
include group:freetext
";

fn expected_text(name: &str) -> String {
    match name {
        "default" => "# Generic functions shipped with the synthesizer.\ndomain default\ninclude group:default\n".into(),
        "freetext" => "# Generic functions plus string manipulation.\ndomain freetext\ninclude group:default\ninclude group:freetext\n".into(),
        "all" => {
            let mut s = String::from("# Every group in one library.\ndomain all\n");
            for g in ["default", "freetext", "dates", "emails", "names", "phones", "times", "units"] {
                s.push_str(&format!("include group:{g}\n"));
            }
            s
        }
        d => DOMAIN_TEMPLATE.replace("{d}", d),
    }
}

#[test]
fn builtin_manifests_are_bit_exact() {
    for name in BUILTIN_DOMAINS {
        assert_eq!(
            builtin_manifest_text(name).unwrap(),
            expected_text(name),
            "{name}"
        );
    }
    assert!(builtin_manifest_text("nope").is_none());
}

#[test]
fn builtin_breadths_are_frozen() {
    let want = [
        ("default", 28),
        ("freetext", 57),
        ("dates", 70),
        ("emails", 65),
        ("names", 66),
        ("phones", 63),
        ("times", 66),
        ("units", 61),
        ("all", 106),
    ];
    for (name, b) in want {
        assert_eq!(builtin_domain(name).unwrap().breadth(), b, "{name}");
    }
}

#[test]
fn domain_libraries_extend_freetext_and_all_covers_everything() {
    let free: Vec<String> = builtin_domain("freetext")
        .unwrap()
        .ids()
        .map(String::from)
        .collect();
    let all = builtin_domain("all").unwrap();
    let all_ids: Vec<&str> = all.ids().collect();
    for name in BUILTIN_DOMAINS {
        let lib = builtin_domain(name).unwrap();
        assert!(lib.ids().all(|id| all_ids.contains(&id)), "{name}");
        if !matches!(name, "default" | "freetext" | "all") {
            assert!(free.iter().all(|id| lib.ids().any(|x| x == id)), "{name}");
        }
    }
}

#[test]
fn display_reparses_to_the_same_manifest() {
    for name in BUILTIN_DOMAINS {
        let m = parse_manifest(builtin_manifest_text(name).unwrap()).unwrap();
        assert_eq!(parse_manifest(&m.to_string()).unwrap(), m);
    }
}

#[test]
fn custom_manifests_mint_constants_and_exclude() {
    let text =
        "include group:default\nexclude prim:reverse\nconst at text \"@\"\nconst seven int 7\n";
    let m = parse_manifest(text).unwrap();
    assert_eq!(m.name, "custom");
    assert_eq!(m.directives[1], Directive::ExcludePrim("reverse".into()));
    let lib = build_library(&m, &Catalog::builtin()).unwrap();
    assert!(!lib.ids().any(|id| id == "reverse"));
    assert!(lib.ids().any(|id| id == "at"));
    assert!(lib.ids().any(|id| id == "seven"));
    assert_ne!(
        lib.fingerprint(),
        builtin_domain("default").unwrap().fingerprint()
    );
}

#[test]
fn manifest_errors_name_the_problem() {
    let cat = Catalog::builtin();
    let bad_prim = parse_manifest("include prim:nope").unwrap();
    assert_eq!(
        build_library(&bad_prim, &cat).unwrap_err(),
        DsbkError::UnknownPrim("nope".into())
    );
    let bad_group = parse_manifest("include group:nope").unwrap();
    assert_eq!(
        build_library(&bad_group, &cat).unwrap_err(),
        DsbkError::UnknownGroup("nope".into())
    );
    assert!(matches!(
        parse_manifest("domain a\nfrobnicate"),
        Err(DsbkError::Parse { line: 2, .. })
    ));
    assert_eq!(
        builtin_domain("nope").unwrap_err(),
        DsbkError::UnknownDomain("nope".into())
    );
}
