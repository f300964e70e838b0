"""Stance and purpose-category classification."""

from .baseline import HingeModel, TfidfVectorizer, train_baseline
from .container import MAGIC, load_models, save_models
from .evaluation import (
    AnnotatedDoc,
    EvalReport,
    LabeledDoc,
    category_docs,
    docs_from_corpus,
    epoch_sweep,
    evaluate,
    evaluate_ovr,
    load_dataset,
    save_dataset,
    split_train_test,
    stance_docs,
    train_ovr,
)
from .features import Vocabulary, featurize, fnv1a_64, preprocess
from .model import (
    HIERARCHICAL_SOFTMAX,
    SOFTMAX,
    HuffmanTree,
    LinearEmbedModel,
    TrainConfig,
    TrainingError,
    loss_and_grad,
    predict,
    train,
)
from .synthetic import make_synthetic_dataset

__all__ = [
    "AnnotatedDoc",
    "category_docs",
    "docs_from_corpus",
    "epoch_sweep",
    "EvalReport",
    "evaluate",
    "evaluate_ovr",
    "featurize",
    "fnv1a_64",
    "HIERARCHICAL_SOFTMAX",
    "HingeModel",
    "HuffmanTree",
    "LabeledDoc",
    "LinearEmbedModel",
    "load_dataset",
    "load_models",
    "loss_and_grad",
    "MAGIC",
    "make_synthetic_dataset",
    "predict",
    "preprocess",
    "save_dataset",
    "save_models",
    "SOFTMAX",
    "split_train_test",
    "stance_docs",
    "TfidfVectorizer",
    "train",
    "train_baseline",
    "train_ovr",
    "TrainConfig",
    "TrainingError",
    "Vocabulary",
]
