from .dqn import train_value_agent
from .nn import ApproximatorParams, approximator_forward, gradient_check
from .policy import (RecommenderPolicy, TrainConfig, load_policy, policy_recommend, recommend,
                     save_policy)
from .ppo import train_policy_agent
