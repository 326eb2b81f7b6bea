#![no_std]
#![forbid(unsafe_code)]
#![doc = r#"
Measurement core for stylometric analysis of labeled news corpora.

Everything in this crate is a pure, deterministic function of its inputs
(seeds included), which is what makes the downstream reports reproducible
byte for byte. The crate is `no_std` + `alloc`: float transcendentals come
from `libm`, collections are the ordered `alloc` ones, and all randomness
flows through explicitly seeded ChaCha generators. File formats, checksums,
and the command-line surface live in the companion `newsstyle-cli` crate.

Pipeline shape:

1. [`corpus`] — labeled articles, stratified splitting, minority upsampling.
2. [`textproc`] — sentence segmentation, tokenization, syllable heuristics.
3. [`lexicon`] — word-category dictionaries with prefix wildcards.
4. [`features`] — the closed 102-feature registry and per-article extraction.
5. [`stats`] — per-pair ANOVA + Cohen's d, feature selection, ordering
   tables, and cross-dataset agreement scoring.
6. [`classifier`] — z-score standardization, a from-scratch linear SVM
   trained by seeded subgradient descent, and evaluation against a fixed
   0.5 balanced baseline.
7. [`synth`] — seeded synthetic feature matrices with planted class
   separations, for end-to-end pipeline validation.
"#]

extern crate alloc;

pub mod classifier;
pub mod corpus;
pub mod features;
pub mod lexicon;
pub mod special;
pub mod stats;
pub mod synth;
pub mod textproc;
