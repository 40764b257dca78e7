"""Node-scoring models: feedforward, diffusion GNN, GCN and GAT."""
from .inputs import ModelInput, normalized_adjacency
from .params import ModelFormatError, ModelParams
from .training import (
    SchemaMismatch,
    TrainConfig,
    TrainingError,
    init_model,
    loss_and_grad,
    mean_loss,
    predict_scores,
    train,
)
from .variants import DivergenceError, ff_forward, gat_attention, gcn_layer, gnn_diffusion

VARIANT_NAMES = ("FF", "GNN", "GCN", "GAT")
