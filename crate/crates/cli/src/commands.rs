use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use kge_core::analysis::{compare_encoders, write_compare_csv};
use kge_core::codec::{read_encoded, write_encoded};
use kge_core::ingest::{open_input, parse_ntriples, sniff_gzip, write_ntriples, ErrorPolicy};
use kge_core::sketch::{count_hybrid, exact_counts, frequent_terms, read_sketch, write_sketch};
use kge_core::synth::{generate, GenConfig};
use kge_core::taxonomy::{collect_schema, ClassTaxonomy};
use kge_core::{decode, encode, encode_with_sketch, Dictionary, Term, Triple};

use crate::args::*;
use crate::output::{write_atomic, write_to};

fn open(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    if path.as_os_str() == "-" {
        return Ok(sniff_gzip(BufReader::new(io::stdin()))?);
    }
    open_input(path)
        .map_err(kge_core::Error::from)
        .with_context(|| format!("cannot open {}", path.display()))
}

fn read_triples(input: &InputArgs) -> Result<(Vec<Triple>, usize)> {
    let policy = if input.skip_bad_lines {
        ErrorPolicy::SkipAndCount
    } else {
        ErrorPolicy::Abort
    };
    let parsed = parse_ntriples(open(&input.input)?, policy)
        .with_context(|| format!("reading {}", input.input.display()))?;
    for e in &parsed.errors {
        log::warn!("skipped {e}");
    }
    if !parsed.errors.is_empty() {
        log::warn!("skipped {} malformed lines", parsed.errors.len());
    }
    log::info!("read {} triples", parsed.triples.len());
    Ok((parsed.triples, parsed.errors.len()))
}

fn open_file(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path)
        .map_err(kge_core::Error::from)
        .with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

pub fn encode_cmd(args: &EncodeArgs) -> Result<()> {
    let config = args.sketch.encode_config();
    let (triples, skipped) = read_triples(&args.input)?;
    let encoded = match &args.sketch_file {
        Some(path) => {
            let sketch = read_sketch(open_file(path)?)
                .with_context(|| format!("reading sketch {}", path.display()))?;
            encode_with_sketch(&triples, &config, &sketch)?
        }
        None => encode(&triples, &config)?,
    };
    write_atomic(&args.out_dict, |w| Ok(encoded.dictionary.write_text(w)?))?;
    if let Some(path) = &args.out_dict_bin {
        write_atomic(path, |w| Ok(encoded.dictionary.write_binary(w)?))?;
    }
    write_atomic(&args.out_data, |w| Ok(write_encoded(&encoded.triples, w)?))?;
    if let Some(path) = &args.out_taxonomy {
        write_atomic(path, |w| Ok(encoded.taxonomy.dump(w)?))?;
    }
    let mut stats = serde_json::to_value(&encoded.stats)?;
    stats["skipped_lines"] = skipped.into();
    write_to(args.stats.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &stats)?;
        writeln!(w)?;
        Ok(())
    })
}

fn read_dictionary(path: &Path) -> Result<Dictionary> {
    let mut r = open_file(path)?;
    let binary = r.fill_buf()?.starts_with(b"KGEDICT1");
    let dict = if binary {
        Dictionary::read_binary(r)
    } else {
        Dictionary::read_text(r)
    };
    dict.with_context(|| format!("reading dictionary {}", path.display()))
}

pub fn decode_cmd(args: &DecodeArgs) -> Result<()> {
    let dict = read_dictionary(&args.dict)?;
    let mut bytes = Vec::new();
    open_file(&args.data)?.read_to_end(&mut bytes)?;
    let encoded = read_encoded(&bytes[..]).with_context(|| format!("reading {}", args.data.display()))?;
    let triples = decode(&encoded, &dict)?;
    write_to(args.output.as_deref(), |w| Ok(write_ntriples(w, &triples)?))
}

pub fn topk_cmd(args: &TopkArgs) -> Result<()> {
    let (triples, _) = read_triples(&args.input)?;
    let s = &args.sketch;
    let estimates = frequent_terms(&triples, s.method(), &s.sketch(), s.partitions, s.workers())?;
    let exact = args
        .with_exact
        .then(|| exact_counts(triples.iter().flat_map(kge_core::ingest::term_occurrences)));
    write_to(args.output.as_deref(), |w| {
        for (rank, e) in estimates.iter().enumerate() {
            write!(w, "{}\t{}\t{}", rank + 1, e.term, e.estimate)?;
            if let Some(exact) = &exact {
                write!(w, "\t{}", exact.get(&e.term).copied().unwrap_or(0))?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

pub fn count_cmd(args: &CountArgs) -> Result<()> {
    let (triples, _) = read_triples(&args.input)?;
    let s = &args.sketch;
    let p = s.partitions;
    let source = |part: usize| {
        triples
            .iter()
            .skip(part)
            .step_by(p)
            .flat_map(kge_core::ingest::term_occurrences)
    };
    let sketch = count_hybrid(&s.sketch(), p, s.workers(), source)?;
    write_atomic(&args.out_sketch, |w| Ok(write_sketch(&sketch, w)?))
}

pub fn taxonomy_cmd(args: &TaxonomyArgs) -> Result<()> {
    let (triples, _) = read_triples(&args.input)?;
    let taxonomy = ClassTaxonomy::from_schema(&collect_schema(&triples));
    write_to(args.output.as_deref(), |w| Ok(taxonomy.dump(w)?))
}

pub fn gen_cmd(args: &GenArgs) -> Result<()> {
    let config = GenConfig {
        distinct: args.n_distinct,
        skew: args.skew,
        occurrences: args.occurrences,
        classes: args.classes,
        depth: args.depth,
        predicates: args.predicates,
        law: args.law.into(),
        seed: args.seed,
    };
    let triples = generate(&config)?;
    write_to(args.output.as_deref(), |w| Ok(write_ntriples(w, &triples)?))
}

fn parse_join(spec: &str) -> Result<(Term, Term)> {
    let strip = |s: &str| s.trim().trim_start_matches('<').trim_end_matches('>').to_string();
    match spec.split_once(',') {
        Some((a, b)) if !strip(a).is_empty() && !strip(b).is_empty() => {
            Ok((Term::iri(strip(a)), Term::iri(strip(b))))
        }
        _ => bail!(kge_core::Error::InvalidArgument(format!(
            "--join expects two predicate IRIs separated by a comma, got {spec:?}"
        ))),
    }
}

pub fn compare_cmd(args: &CompareArgs) -> Result<()> {
    let join = args.join.as_deref().map(parse_join).transpose()?;
    let (triples, _) = read_triples(&args.input)?;
    let rows = compare_encoders(&triples, &args.sketch.encode_config(), args.sketch.seed, join)?;
    write_to(args.output.as_deref(), |w| Ok(write_compare_csv(&rows, w)?))
}
