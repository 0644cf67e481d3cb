use std::path::Path;

use anyhow::Context;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use treetwist::constructions::{
    binary_certificate, locally_normal_certificate, strongly_saturated_certificate, verify_certificate,
};
use treetwist::quotient::{cache, induce, twisted_classes};
use treetwist::selfsim::Letter;
use treetwist::{AutomorphismSpec, Certificate, CertificateKind, Error, Presentation, Verdict, Word};

use crate::report::Report;
use crate::Global;

fn presentation_fields(r: &mut Report, p: &Presentation) {
    r.field("presentation", p.name()).field("presentation_hash", p.hash());
}

pub fn eval(p: &Presentation, word: &str, depth: usize) -> anyhow::Result<Report> {
    let w: Word = word.parse()?;
    let g = p.eval_isometry(&w, depth)?;
    let sig = p.signature();
    let mut r = Report::new("eval");
    presentation_fields(&mut r, p);
    r.field("word", w.to_string())
        .field("depth", depth)
        .field("identity", g.is_identity())
        .field("stabilizer_depth", g.stabilizer_depth())
        .field("portrait", serde_json::to_value(&g)?);
    r.header = vec!["level", "level_size", "fixed", "nontrivial_labels"];
    let mut levels = Vec::new();
    for j in 0..=depth {
        let fixed = g.fixed_count(j)?;
        // labels sit on levels 0..depth-1
        let nontrivial = if j < depth { Some(g.nontrivial_label_count(j)?) } else { None };
        levels.push(json!({
            "level": j,
            "level_size": sig.level_size(j),
            "fixed": fixed,
            "nontrivial_labels": nontrivial,
        }));
        r.rows.push(vec![
            j.to_string(),
            sig.level_size(j).to_string(),
            fixed.to_string(),
            nontrivial.map_or_else(|| "-".into(), |n| n.to_string()),
        ]);
    }
    r.field("levels", levels);
    r.provenance("stabilizer_depth", "Portrait::stabilizer_depth")
        .provenance("levels.fixed", "Portrait::fixed_count")
        .provenance("levels.nontrivial_labels", "Portrait::nontrivial_label_count");
    r.summary = vec![
        format!("{} on {} tree, depth {depth}", w, sig),
        format!(
            "{}stabilizer depth {}",
            if g.is_identity() { "identity; " } else { "" },
            g.stabilizer_depth()
        ),
    ];
    Ok(r)
}

/// Returns the report and whether the cap stopped the table early.
pub fn quotient(g: &Global, p: &Presentation, d_max: usize, spec: &str) -> anyhow::Result<(Report, bool)> {
    let spec = AutomorphismSpec::parse(spec, p)?;
    let mut r = Report::new("quotient");
    presentation_fields(&mut r, p);
    r.field("spec", serde_json::to_value(&spec)?);
    r.header = vec!["depth", "order", "classes", "checked_pairs", "status"];
    let mut rows = Vec::new();
    let mut capped = false;
    let mut last = 0;
    for d in 1..=d_max {
        let q = match cache::build_cached(g.cache_dir(), p, d, g.cap) {
            Ok(q) => q,
            Err(Error::CapExceeded { cap, partial }) => {
                eprintln!("depth {d}: cap of {cap} elements exceeded after {partial}");
                rows.push(json!({"depth": d, "status": "cap-exceeded", "cap": cap}));
                r.rows.push(vec![d.to_string(), format!(">{cap}"), "-".into(), "-".into(), "cap-exceeded".into()]);
                capped = true;
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let phi = induce(p, &q, &spec)?;
        if phi.checked_pairs > 0 {
            eprintln!(
                "depth {d}: induced map checked multiplicative on all {} (generator, element) pairs",
                phi.checked_pairs
            );
        }
        let classes = twisted_classes(&q, &phi).count();
        let status = if classes < last { "decreased" } else { "ok" };
        last = classes;
        rows.push(json!({
            "depth": d,
            "order": q.order(),
            "classes": classes,
            "checked_pairs": phi.checked_pairs,
            "status": status,
        }));
        r.rows.push(vec![
            d.to_string(),
            q.order().to_string(),
            classes.to_string(),
            phi.checked_pairs.to_string(),
            status.into(),
        ]);
    }
    r.field("rows", rows);
    r.provenance("rows.order", "QuotientGroup::build (BFS closure over generators)")
        .provenance("rows.classes", "twisted_classes (union-find over h q phi(h)^-1 moves)")
        .provenance("rows.checked_pairs", "induce (multiplicativity check of generator-image specs)");
    r.summary = vec![format!("{} with {spec}: twisted classes of G/St_d", p.name())];
    Ok((r, capped))
}

pub fn certify(g: &Global, p: &Presentation, kind: CertificateKind, k: usize, spec: &str) -> anyhow::Result<Certificate> {
    let spec = AutomorphismSpec::parse(spec, p)?;
    let opts = g.certify_options();
    let cert = match kind {
        CertificateKind::Binary => binary_certificate(p, &spec, k, &opts),
        CertificateKind::StronglySaturated => strongly_saturated_certificate(p, &spec, k, &opts),
        CertificateKind::LocallyNormal => locally_normal_certificate(p, &spec, k, &opts),
    }
    .with_context(|| format!("{kind} certificate for {} with {spec}", p.name()))?;
    Ok(cert)
}

pub fn certificate_summary(c: &Certificate, out: Option<&Path>) -> Report {
    let mut r = Report::new("certify");
    r.field("presentation", c.presentation.clone())
        .field("presentation_hash", c.presentation_hash.clone())
        .field("kind", c.kind.to_string())
        .field("claimed_bound", c.claimed_bound)
        .field("max_level", c.max_level());
    if let Some(path) = out {
        r.field("out", path.display().to_string());
    }
    r.provenance("claimed_bound", "number of certificate entries")
        .provenance("max_level", "deepest avoidance level among entries");
    r.header = vec!["entry", "word", "m", "n", "separation_level"];
    for (i, e) in c.entries.iter().enumerate() {
        r.rows.push(vec![
            i.to_string(),
            e.word.to_string(),
            e.m.to_string(),
            e.n.to_string(),
            e.separation.level().to_string(),
        ]);
    }
    r.summary = vec![format!(
        "{} certificate for {} with {}: R >= {} (twist {}, conjugator {})",
        c.kind, c.presentation, c.spec, c.claimed_bound, c.twist, c.conjugator
    )];
    r.summary.extend(c.notes.iter().map(|n| format!("  {n}")));
    r
}

pub fn verify(g: &Global, p: &Presentation, c: &Certificate, depth: Option<usize>) -> anyhow::Result<(Report, Verdict)> {
    let depth = depth.unwrap_or_else(|| c.max_level().max(1));
    let verdict = verify_certificate(p, c, depth, g.cap)?;
    let mut r = Report::new("verify");
    r.field("presentation", p.name())
        .field("kind", c.kind.to_string())
        .field("claimed_bound", c.claimed_bound)
        .field("depth", depth)
        .field("result", serde_json::to_value(&verdict)?);
    r.provenance("claimed_bound", "certificate")
        .provenance("result", "verify_certificate (symbolic re-derivation plus G/St_depth cross-check)");
    r.summary = vec![format!("{}: {verdict}", c.kind)];
    Ok((r, verdict))
}

fn random_word(rng: &mut ChaCha8Rng, names: &[String], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters(
        (0..len)
            .map(|_| Letter::new(names[rng.gen_range(0..names.len())].clone(), rng.gen_bool(0.5)))
            .collect(),
    )
}

/// Random pairs `(u, v)`: evaluation is multiplicative, inverts, commutes
/// with truncation, and (with a spec) the automorphism is multiplicative.
/// Returns the report and the number of failing samples.
pub fn check(
    g: &Global,
    p: &Presentation,
    samples: usize,
    depth: usize,
    max_len: usize,
    spec: Option<&str>,
) -> anyhow::Result<(Report, usize)> {
    let spec = spec.map(|s| AutomorphismSpec::parse(s, p)).transpose()?;
    let names = p.generator_names();
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut r = Report::new("check");
    presentation_fields(&mut r, p);
    r.header = vec!["sample", "u", "v", "failure"];
    let mut failures = Vec::new();
    for i in 0..samples {
        let u = random_word(&mut rng, &names, max_len);
        let v = random_word(&mut rng, &names, max_len);
        let pu = p.eval(&u, depth)?;
        let pv = p.eval(&v, depth)?;
        let uv = u.concat(&v);
        let mut failure = None;
        if p.eval(&uv, depth)? != pu.compose(&pv)? {
            failure = Some("product");
        } else if p.eval(&u.inverse(), depth)? != pu.inverse() {
            failure = Some("inverse");
        } else if p.eval(&u, depth - 1)? != pu.truncate(depth - 1)? {
            failure = Some("truncation");
        } else if let Some(spec) = &spec {
            if spec.eval_image(p, &uv, depth)? != spec.eval_image(p, &u, depth)?.compose(&spec.eval_image(p, &v, depth)?)? {
                failure = Some("automorphism");
            }
        }
        if let Some(f) = failure {
            failures.push(json!({"sample": i, "u": u.to_string(), "v": v.to_string(), "failure": f}));
            r.rows.push(vec![i.to_string(), u.to_string(), v.to_string(), f.into()]);
        }
    }
    let failed = failures.len();
    r.field("seed", g.seed)
        .field("samples", samples)
        .field("depth", depth)
        .field("max_len", max_len)
        .field("spec", spec.as_ref().map(|s| s.to_string()))
        .field("failed", failed)
        .field("failures", failures);
    r.provenance("failed", "Presentation::eval compared with Portrait::compose/inverse/truncate");
    r.summary = vec![format!(
        "{} random pairs on {} at depth {depth} (seed {}): {failed} failed",
        samples,
        p.name(),
        g.seed
    )];
    Ok((r, failed))
}
