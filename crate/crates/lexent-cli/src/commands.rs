//! Command implementations.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use lexent::balapinc::{write_scored_pairs, FeatureCache, PairScore};
use lexent::datasets::{
    balance_classes, jmth_transform, load_pairs, load_rated_pairs, save_pairs, split_dev_test_with,
    LabeledPair, RelationTaxonomy,
};
use lexent::eval::{
    cross_validate, different_evaluation, tune_balapinc, tune_svd_grid, CrossValReport, EvalSetup,
    GridScheme, MetricsReport, PairScorer, SvmSettings,
};
use lexent::pair_features::ReferenceSet;
use lexent::scorers::{fit_balapinc_scorer, train_svm_scorer, PairRepresentation};
use lexent::svm::{Kernel, TrainConfig};
use lexent::vsm::io::{
    read_co_matrix, read_embedding, read_ppmi_matrix, write_atomic, write_co_matrix,
    write_embedding, write_ppmi_matrix,
};
use lexent::vsm::{
    count_cooccurrences, ppmi, project, read_tagged_corpus, truncated_svd, ContextPolicy, SpaceKind,
};

use crate::config::{parse_list, Config};
use crate::fail::{CliError, CliResult};
use crate::manifest::{create_run_dir, require_bundle_exists, require_exists, Manifest};
use crate::{
    Algo, EvaluateArgs, IngestArgs, PpmiArgs, SplitArgs, SvdArgs, TransformArgs, TuneArgs,
};

// ------------------------------------------------------------------
// matrix construction commands
// ------------------------------------------------------------------

pub fn run_ingest(args: &IngestArgs, config: &Config) -> CliResult<()> {
    require_exists(&args.corpus, "corpus file")?;
    require_exists(&args.vocab, "vocabulary file")?;
    let window = config.resolve(args.window, "window", 4usize)?;
    let policy: ContextPolicy = config
        .resolve(args.policy.clone(), "policy", "general".to_owned())?
        .parse()?;

    let sentences = read_tagged_corpus(&args.corpus)?;
    let vocab = lexent::vsm::io::read_vocabulary(&args.vocab)?;
    let (matrix, summary) = count_cooccurrences(&sentences, &vocab, window, policy)?;
    write_co_matrix(&args.out_prefix, &matrix)?;

    let mut manifest = Manifest::new("ingest");
    manifest.input("corpus", &args.corpus)?;
    manifest.input("vocab", &args.vocab)?;
    manifest.set("window", window);
    manifest.set("policy", policy);
    manifest.set("sentences", summary.sentences);
    manifest.set("tokens", summary.tokens);
    manifest.set("occurrences", summary.occurrences);
    manifest.set("oov_tokens", summary.oov_tokens);
    manifest.set("rows", matrix.n_rows());
    manifest.set("cols", matrix.n_cols());
    manifest.set("nnz", matrix.nnz());
    manifest.write(&manifest_path(&args.out_prefix))?;

    println!(
        "counted {} sentences ({} tokens): {} occurrences, {} out-of-vocabulary tokens",
        summary.sentences, summary.tokens, summary.occurrences, summary.oov_tokens
    );
    println!(
        "wrote {}x{} count matrix ({} nonzero) to {}",
        matrix.n_rows(),
        matrix.n_cols(),
        matrix.nnz(),
        args.out_prefix.display()
    );
    Ok(())
}

pub fn run_ppmi(args: &PpmiArgs, _config: &Config) -> CliResult<()> {
    require_bundle_exists(&args.counts_prefix, "count matrix file")?;
    let counts = read_co_matrix(&args.counts_prefix)?;
    let weighted = ppmi(&counts)?;
    write_ppmi_matrix(&args.out_prefix, &weighted)?;

    let mut manifest = Manifest::new("ppmi");
    manifest.input_bundle("counts", &args.counts_prefix)?;
    manifest.set("rows", weighted.n_rows());
    manifest.set("cols", weighted.n_cols());
    manifest.set("nnz", weighted.nnz());
    manifest.set("density", format!("{:.6}", weighted.density()));
    manifest.write(&manifest_path(&args.out_prefix))?;

    println!(
        "wrote PPMI matrix ({} nonzero, density {:.4}) to {}",
        weighted.nnz(),
        weighted.density(),
        args.out_prefix.display()
    );
    Ok(())
}

pub fn run_svd(args: &SvdArgs, config: &Config) -> CliResult<()> {
    require_bundle_exists(&args.ppmi_prefix, "PPMI matrix file")?;
    let k = config.resolve(args.k, "k", 100usize)?;
    let p = config.resolve(args.p, "p", 1.0f64)?;
    let seed = config.resolve(args.seed, "svd_seed", 1u64)?;
    let space: SpaceKind = config
        .resolve(args.space.clone(), "space", "general".to_owned())?
        .parse()?;
    if !(0.0..=1.0).contains(&p) {
        eprintln!("warning: p = {p} lies outside [0, 1]; proceeding anyway");
    }

    let matrix = read_ppmi_matrix(&args.ppmi_prefix)?;
    let factors = truncated_svd(&matrix, k, seed)?;
    let embedding = project(&factors, p, space, matrix.vocabulary().clone())?;
    write_embedding(&args.out, &embedding)?;

    let mut manifest = Manifest::new("svd");
    manifest.input_bundle("ppmi", &args.ppmi_prefix)?;
    manifest.set("k", k);
    manifest.set("p", p);
    manifest.set("seed", seed);
    manifest.set("space", space);
    manifest.write(&manifest_path(&args.out))?;

    println!(
        "wrote {}-dimensional {} embedding for {} terms to {}",
        k,
        space,
        embedding.vocabulary().len(),
        args.out.display()
    );
    Ok(())
}

// ------------------------------------------------------------------
// dataset commands
// ------------------------------------------------------------------

pub fn run_transform(args: &TransformArgs, config: &Config) -> CliResult<()> {
    require_exists(&args.rated, "rated-pairs file")?;
    let seed = config.resolve(args.seed, "seed", 1u64)?;
    let taxonomy = match &args.taxonomy {
        Some(path) => {
            require_exists(path, "taxonomy file")?;
            RelationTaxonomy::load(path)?
        }
        None => RelationTaxonomy::embedded().clone(),
    };
    let rated = load_rated_pairs(&args.rated)?;
    let (pairs, report) = jmth_transform(&rated, &taxonomy, seed)?;
    save_pairs(&args.out, &pairs)?;

    let mut lines = format!(
        "input={}\nafter_clean={}\nafter_double={}\nones={}\nzeros={}\nfinal={}\n",
        report.input,
        report.after_clean,
        report.after_double,
        report.ones,
        report.zeros,
        report.final_size
    );
    if report.balanced_by_removing_ones {
        lines.push_str("balanced_by_removing_ones=true\n");
    }
    for (id, size) in &report.small_subcategories {
        lines.push_str(&format!("small_subcategory={id} size={size}\n"));
    }
    print!("{lines}");
    if let Some(report_path) = &args.report {
        write_atomic(report_path, &lines)?;
    }

    let mut manifest = Manifest::new("transform-jmth");
    manifest.input("rated", &args.rated)?;
    if let Some(path) = &args.taxonomy {
        manifest.input("taxonomy", path)?;
    } else {
        manifest.set("taxonomy", "embedded");
    }
    manifest.set("seed", seed);
    manifest.set("final_size", report.final_size);
    manifest.write(&manifest_path(&args.out))?;
    Ok(())
}

pub fn run_split(args: &SplitArgs, config: &Config) -> CliResult<()> {
    require_exists(&args.dataset, "dataset file")?;
    let seed = config.resolve(args.seed, "seed", 1u64)?;
    let f1 = config.resolve(args.dev1_fraction, "dev1_fraction", 1.0 / 3.0)?;
    let f2 = config.resolve(args.dev2_fraction, "dev2_fraction", 1.0 / 3.0)?;
    let dataset = load_pairs(&args.dataset)?;
    let (dev1, dev2, test, report) = split_dev_test_with(&dataset, f1, f2, seed)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", args.out_dir.display())))?;
    save_pairs(&args.out_dir.join("dev1.tsv"), &dev1)?;
    save_pairs(&args.out_dir.join("dev2.tsv"), &dev2)?;
    save_pairs(&args.out_dir.join("test.tsv"), &test)?;

    let mut manifest = Manifest::new("split");
    manifest.input("dataset", &args.dataset)?;
    manifest.set("seed", seed);
    manifest.set("dev1_fraction", f1);
    manifest.set("dev2_fraction", f2);
    manifest.set("dev1", format!("{}+{}", report.dev1.0, report.dev1.1));
    manifest.set("dev2", format!("{}+{}", report.dev2.0, report.dev2.1));
    manifest.set("test", format!("{}+{}", report.test.0, report.test.1));
    manifest.set("input_balanced", report.input_balanced);
    manifest.write(&args.out_dir.join("split.manifest.kv"))?;

    println!(
        "split {} pairs into dev1 {} / dev2 {} / test {} under {}",
        dataset.len(),
        dev1.len(),
        dev2.len(),
        test.len(),
        args.out_dir.display()
    );
    if !report.input_balanced {
        eprintln!("warning: input dataset is not class-balanced; splits preserve the imbalance");
    }
    Ok(())
}

// ------------------------------------------------------------------
// tune
// ------------------------------------------------------------------

pub fn run_tune(args: &TuneArgs, config: &Config) -> CliResult<()> {
    require_exists(&args.dev1, "dev1 file")?;
    require_exists(&args.dev2, "dev2 file")?;
    let dev1 = load_pairs(&args.dev1)?;
    let dev2 = load_pairs(&args.dev2)?;
    let mut manifest = Manifest::new("tune");
    manifest.set("algo", format!("{:?}", args.algo).to_lowercase());
    manifest.input("dev1", &args.dev1)?;
    manifest.input("dev2", &args.dev2)?;

    let mut out_lines = String::new();
    match args.algo {
        Algo::Balapinc => {
            let prefix = required(&args.ppmi_prefix, "--ppmi-prefix")?;
            require_bundle_exists(prefix, "PPMI matrix file")?;
            let grid_raw = config.resolve(
                args.max_f_grid.clone(),
                "max_f_grid",
                "1000,2000,3000,4000,5000".to_owned(),
            )?;
            let grid: Vec<usize> = parse_list(&grid_raw, "max_f grid")?;
            let matrix = read_ppmi_matrix(prefix)?;
            let params = tune_balapinc(&dev1, &dev2, &matrix, &grid)?;
            out_lines.push_str(&format!(
                "algo=balapinc\nmax_f={}\nt={:.16e}\n",
                params.max_f.unwrap_or(0),
                params.t
            ));
            manifest.input_bundle("ppmi", prefix)?;
            manifest.set("max_f_grid", grid_raw);
        }
        Algo::Convecs | Algo::Simdiffs => {
            let ks_raw = config.resolve(
                args.k_grid.clone(),
                "k_grid",
                "100,200,300,400,500".to_owned(),
            )?;
            let ps_raw = config.resolve(
                args.p_grid.clone(),
                "p_grid",
                "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0".to_owned(),
            )?;
            let ks: Vec<usize> = parse_list(&ks_raw, "k grid")?;
            let ps: Vec<f64> = parse_list(&ps_raw, "p grid")?;
            let svd_seed = config.resolve(args.svd_seed, "svd_seed", 1u64)?;
            let svm = svm_settings(args.algo, args, config)?;
            manifest.set("k_grid", &ks_raw);
            manifest.set("p_grid", &ps_raw);
            manifest.set("svd_seed", svd_seed);
            manifest.set("kernel", svm.kernel);
            manifest.set("svm_c", svm.config.c);
            manifest.set("svm_seed", svm.config.seed);

            let (k, p) = match args.algo {
                Algo::Convecs => {
                    let prefix = required(&args.ppmi_prefix, "--ppmi-prefix")?;
                    require_bundle_exists(prefix, "PPMI matrix file")?;
                    manifest.input_bundle("ppmi", prefix)?;
                    let matrix = read_ppmi_matrix(prefix)?;
                    tune_svd_grid(
                        &dev1,
                        &dev2,
                        &GridScheme::ConVecs { ppmi: &matrix },
                        &ks,
                        &ps,
                        &svm,
                        svd_seed,
                    )?
                }
                Algo::Simdiffs => {
                    let dom_prefix = required(&args.dom_ppmi_prefix, "--dom-ppmi-prefix")?;
                    let fun_prefix = required(&args.fun_ppmi_prefix, "--fun-ppmi-prefix")?;
                    let refs_path = required(&args.references, "--references")?;
                    require_bundle_exists(dom_prefix, "domain PPMI matrix file")?;
                    require_bundle_exists(fun_prefix, "function PPMI matrix file")?;
                    require_exists(refs_path, "reference word list")?;
                    manifest.input_bundle("dom_ppmi", dom_prefix)?;
                    manifest.input_bundle("fun_ppmi", fun_prefix)?;
                    manifest.input("references", refs_path)?;
                    let domain = read_ppmi_matrix(dom_prefix)?;
                    let function = read_ppmi_matrix(fun_prefix)?;
                    let references = ReferenceSet::load(refs_path)?;
                    tune_svd_grid(
                        &dev1,
                        &dev2,
                        &GridScheme::SimDiffs {
                            domain: &domain,
                            function: &function,
                            references: &references,
                        },
                        &ks,
                        &ps,
                        &svm,
                        svd_seed,
                    )?
                }
                Algo::Balapinc => unreachable!(),
            };
            out_lines.push_str(&format!("algo={:?}\nk={k}\np={p}\n", args.algo));
            out_lines = out_lines.to_lowercase();
        }
    }
    write_atomic(&args.out, &out_lines)?;
    manifest.write(&manifest_path(&args.out))?;
    print!("{out_lines}");
    Ok(())
}

// ------------------------------------------------------------------
// evaluate
// ------------------------------------------------------------------

enum DataSplit {
    Cv(Vec<LabeledPair>),
    Transfer {
        train: Vec<LabeledPair>,
        test: Vec<LabeledPair>,
    },
}

impl DataSplit {
    fn scored_rows(&self, report: &CrossValReport) -> Vec<(PairScore, Option<u8>)> {
        let lookup: &[LabeledPair] = match self {
            DataSplit::Cv(d) => d,
            DataSplit::Transfer { test, .. } => test,
        };
        report
            .pair_scores
            .iter()
            .map(|&(idx, score)| {
                let pair = &lookup[idx];
                (
                    PairScore {
                        a: pair.a.clone(),
                        b: pair.b.clone(),
                        score,
                    },
                    Some(pair.label),
                )
            })
            .collect()
    }
}

fn evaluate_protocol<S, F>(
    split: &DataSplit,
    setup: EvalSetup,
    folds: usize,
    seed: u64,
    factory: F,
) -> CliResult<CrossValReport>
where
    S: PairScorer,
    F: Fn(&[LabeledPair]) -> lexent::Result<S> + Sync,
{
    let report = match split {
        DataSplit::Cv(dataset) => cross_validate(dataset, factory, setup, folds, seed)?,
        DataSplit::Transfer { train, test } => different_evaluation(train, test, factory)?,
    };
    Ok(report)
}

fn svm_settings(algo: Algo, args: &TuneArgs, config: &Config) -> CliResult<SvmSettings> {
    let kernel = match algo {
        Algo::Convecs => Kernel::Polynomial {
            degree: config.resolve(args.degree, "degree", 2u32)?,
        },
        Algo::Simdiffs => Kernel::Rbf {
            gamma: config.resolve(args.gamma, "gamma", 0.01f64)?,
        },
        Algo::Balapinc => return Err(CliError::usage("balapinc does not use an SVM")),
    };
    Ok(SvmSettings {
        kernel,
        config: TrainConfig {
            c: config.resolve(args.svm_c, "svm_c", 1.0f64)?,
            seed: config.resolve(args.svm_seed, "svm_seed", 1u64)?,
            ..TrainConfig::default()
        },
    })
}

fn format_ap(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |x| format!("{x:.6}"))
}

fn metrics_kv(prefix: &str, m: &MetricsReport, out: &mut String) {
    out.push_str(&format!("{prefix}ap0={}\n", format_ap(m.ap0)));
    out.push_str(&format!("{prefix}ap1={}\n", format_ap(m.ap1)));
    out.push_str(&format!("{prefix}pre={:.6}\n", m.pre));
    out.push_str(&format!("{prefix}rec={:.6}\n", m.rec));
    out.push_str(&format!("{prefix}f={:.6}\n", m.f));
    out.push_str(&format!("{prefix}acc={:.4}\n", m.acc));
    out.push_str(&format!("{prefix}ci_low={:.6}\n", m.wilson_low));
    out.push_str(&format!("{prefix}ci_high={:.6}\n", m.wilson_high));
    out.push_str(&format!("{prefix}c00={}\n", m.confusion.c00));
    out.push_str(&format!("{prefix}c01={}\n", m.confusion.c01));
    out.push_str(&format!("{prefix}c10={}\n", m.confusion.c10));
    out.push_str(&format!("{prefix}c11={}\n", m.confusion.c11));
    if !m.degenerate.is_empty() {
        out.push_str(&format!("{prefix}degenerate={}\n", m.degenerate.join(",")));
    }
}

fn report_kv(report: &CrossValReport) -> String {
    let mut out = String::new();
    metrics_kv("", &report.pooled, &mut out);
    out.push_str(&format!("leaked_terms={}\n", report.leaked_terms));
    out.push_str(&format!("skipped_pairs={}\n", report.skipped_pairs));
    out.push_str(&format!("folds={}\n", report.folds.len()));
    for (i, fold) in report.folds.iter().enumerate() {
        metrics_kv(&format!("fold{i}_"), fold, &mut out);
    }
    out
}

fn report_table(algo: Algo, setup: EvalSetup, report: &CrossValReport) -> String {
    let m = &report.pooled;
    let mut out = String::new();
    out.push_str(&format!("algorithm: {:?}\nsetup: {setup}\n\n", algo));
    out.push_str("measure      value\n");
    out.push_str("-----------  ---------\n");
    out.push_str(&format!("AP0          {}\n", format_ap(m.ap0)));
    out.push_str(&format!("AP1          {}\n", format_ap(m.ap1)));
    out.push_str(&format!("Pre          {:.4}\n", m.pre));
    out.push_str(&format!("Rec          {:.4}\n", m.rec));
    out.push_str(&format!("F            {:.4}\n", m.f));
    out.push_str(&format!("Acc          {:.1}%\n", m.acc));
    out.push_str(&format!(
        "95% C.I.     {:.1}%--{:.1}%\n",
        100.0 * m.wilson_low,
        100.0 * m.wilson_high
    ));
    out.push_str(&format!(
        "confusion    c00={} c01={} c10={} c11={}\n",
        m.confusion.c00, m.confusion.c01, m.confusion.c10, m.confusion.c11
    ));
    out.push_str(&format!("leaked terms {}\n", report.leaked_terms));
    out.push_str(&format!("skipped      {}\n", report.skipped_pairs));
    out
}

pub fn run_evaluate(args: &EvaluateArgs, config: &Config) -> CliResult<()> {
    let setup: EvalSetup = args.setup.parse()?;
    let seed = config.resolve(args.seed, "seed", 1u64)?;
    let folds = config.resolve(args.folds, "folds", 10usize)?;
    let mut manifest = Manifest::new("evaluate");
    manifest.set("algo", format!("{:?}", args.algo).to_lowercase());
    manifest.set("setup", setup);
    manifest.set("seed", seed);

    // assemble the data split
    let split = if setup == EvalSetup::Different {
        let train_path = required(&args.train, "--train")?;
        let test_path = required(&args.test, "--test")?;
        require_exists(train_path, "training dataset")?;
        require_exists(test_path, "test dataset")?;
        manifest.input("train", train_path)?;
        manifest.input("test", test_path)?;
        let train = load_pairs(train_path)?;
        let mut test = load_pairs(test_path)?;
        if args.balance_test {
            let (balanced, removed_ones) = balance_classes(&test, seed);
            manifest.set("balance_test", true);
            manifest.set("balanced_test_size", balanced.len());
            if removed_ones {
                eprintln!("warning: test set had fewer zeros than ones; removed ones to balance");
            }
            test = balanced;
        }
        DataSplit::Transfer { train, test }
    } else {
        let dataset_path = required(&args.dataset, "--dataset")?;
        require_exists(dataset_path, "dataset")?;
        manifest.input("dataset", dataset_path)?;
        manifest.set("folds", folds);
        DataSplit::Cv(load_pairs(dataset_path)?)
    };

    // fit-and-score under the chosen representation
    let report = match args.algo {
        Algo::Balapinc => {
            let prefix = required(&args.ppmi_prefix, "--ppmi-prefix")?;
            require_bundle_exists(prefix, "PPMI matrix file")?;
            manifest.input_bundle("ppmi", prefix)?;
            let max_f = config.resolve(args.max_f, "max_f", 1000usize)?;
            manifest.set("max_f", max_f);
            let matrix = read_ppmi_matrix(prefix)?;
            let cache = Arc::new(FeatureCache::build_full(&matrix, Some(max_f)));
            evaluate_protocol(&split, setup, folds, seed, |train| {
                fit_balapinc_scorer(&cache, train)
            })?
        }
        Algo::Convecs => {
            let emb_path = required(&args.embedding, "--embedding")?;
            require_exists(emb_path, "embedding file")?;
            manifest.input("embedding", emb_path)?;
            let degree = config.resolve(args.degree, "degree", 2u32)?;
            let svm_config = TrainConfig {
                c: config.resolve(args.svm_c, "svm_c", 1.0f64)?,
                seed: config.resolve(args.svm_seed, "svm_seed", 1u64)?,
                ..TrainConfig::default()
            };
            manifest.set("kernel", Kernel::Polynomial { degree });
            manifest.set("svm_c", svm_config.c);
            manifest.set("svm_seed", svm_config.seed);
            let emb = Arc::new(read_embedding(emb_path)?);
            let repr = PairRepresentation::ConVecs { emb };
            evaluate_protocol(&split, setup, folds, seed, |train| {
                train_svm_scorer(&repr, train, Kernel::Polynomial { degree }, &svm_config)
            })?
        }
        Algo::Simdiffs => {
            let dom_path = required(&args.dom_embedding, "--dom-embedding")?;
            let fun_path = required(&args.fun_embedding, "--fun-embedding")?;
            let refs_path = required(&args.references, "--references")?;
            require_exists(dom_path, "domain embedding")?;
            require_exists(fun_path, "function embedding")?;
            require_exists(refs_path, "reference word list")?;
            manifest.input("dom_embedding", dom_path)?;
            manifest.input("fun_embedding", fun_path)?;
            manifest.input("references", refs_path)?;
            let gamma = config.resolve(args.gamma, "gamma", 0.01f64)?;
            let svm_config = TrainConfig {
                c: config.resolve(args.svm_c, "svm_c", 1.0f64)?,
                seed: config.resolve(args.svm_seed, "svm_seed", 1u64)?,
                ..TrainConfig::default()
            };
            manifest.set("kernel", Kernel::Rbf { gamma });
            manifest.set("svm_c", svm_config.c);
            manifest.set("svm_seed", svm_config.seed);
            let dom = Arc::new(read_embedding(dom_path)?);
            let fun = Arc::new(read_embedding(fun_path)?);
            let refs = ReferenceSet::load(refs_path)?;
            let (refs, dropped) = refs.restricted_to(&[&dom, &fun]);
            if !dropped.is_empty() {
                eprintln!(
                    "warning: {} reference words missing from the embeddings were dropped",
                    dropped.len()
                );
                manifest.set("dropped_references", dropped.len());
            }
            let repr = PairRepresentation::SimDiffs {
                dom,
                fun,
                refs: Arc::new(refs),
            };
            evaluate_protocol(&split, setup, folds, seed, |train| {
                train_svm_scorer(&repr, train, Kernel::Rbf { gamma }, &svm_config)
            })?
        }
    };

    // write the run directory
    let run_dir = create_run_dir(&args.out_dir, seed, args.run_dir.as_deref())?;
    manifest.write(&run_dir.join("manifest.kv"))?;
    write_atomic(&run_dir.join("report.kv"), &report_kv(&report))?;
    write_atomic(
        &run_dir.join("report.txt"),
        &report_table(args.algo, setup, &report),
    )?;
    let params_line = format!("algo={:?} setup={setup} seed={seed}", args.algo).to_lowercase();
    write_scored_pairs(
        &run_dir.join("scores.tsv"),
        &split.scored_rows(&report),
        &params_line,
    )?;

    print!("{}", report_table(args.algo, setup, &report));
    println!("\nrun directory: {}", run_dir.display());
    Ok(())
}

// ------------------------------------------------------------------
// small helpers
// ------------------------------------------------------------------

fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| CliError::usage(format!("{flag} is required for this invocation")))
}

fn manifest_path(primary_output: &Path) -> PathBuf {
    let mut name = primary_output
        .file_name()
        .unwrap_or_default()
        .to_os_string();
    name.push(".manifest.kv");
    primary_output.with_file_name(name)
}
