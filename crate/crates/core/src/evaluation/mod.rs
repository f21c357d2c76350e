//! ROUGE precision against proxy-gold references and the ablation runner.

mod ablation;
mod rouge;

pub use ablation::{run_ablation, ablation_grid, AblationConfig, AblationReport, AblationRow, CellError};
pub use rouge::{
    build_proxy_gold, lcs_length, proxy_gold_reviews, rouge_l_precision, rouge_n_precision, rouge_tokens,
    RougeReport, RougeScores, PROXY_GOLD_SIZE,
};
