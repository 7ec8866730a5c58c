"""Penalized vertex discriminant analysis.

Multicategory classification with simultaneous variable selection.  Classes
are coded as vertices of a regular simplex in R^(k-1); a linear model is fit
by cyclic coordinate descent on a smoothed epsilon-insensitive loss with lasso
and/or grouped Euclidean penalties on the slopes.
"""

from vda.simplex import SimplexCode, build_simplex, classify, default_epsilon
from vda.loss import SmoothingConfig, exact_loss, vector_loss
from vda.penalty import PenaltyConfig, penalty_value
from vda.descent import CoefficientSet, DescentConfig, FitResult, fit, objective
from vda.model import (VdaModel, active_predictors, load, predict, save,
                       train)
from vda.tuning import (CvResult, Grid, StabilityReport, cross_validate,
                        default_grid, lambda_max, stability_select)
from vda.datagen import SimSpec, generate, bayes_classify
from vda.consistency import RiskLandscape, risk, minimize_risk, check_fisher

__version__ = "0.1.0"
