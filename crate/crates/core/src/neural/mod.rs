//! Bidirectional LSTM sequence enhancer: training, autoregressive
//! prediction and the persisted model file.

mod codec;
mod lstm;
mod model;

pub use codec::{load_model, save_model, MAGIC as MODEL_MAGIC, VERSION as MODEL_VERSION};
pub use lstm::LstmCell;
pub use model::{
    blstm_predict, split_corpus, train_model, BlstmModel, Predictor, TrainConfig, TrainingMeta,
    DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0, HOLDOUT_FRACTION, TRAIN_DISCARD, TRAIN_LEN,
};
