from .logit import LogitFit, add_intercept, logit_fit
from .mi import DISCRETE_PLUGIN, KNN, MIConfig, mi_discrete, mi_knn, score_features
from .special import digamma, log_gamma, reg_inc_beta, reg_inc_gamma
from .significance import ANOVA_F, CHI2, TestResult, anova_oneway, chi2_independence, crosstab
