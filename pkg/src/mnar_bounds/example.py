"""The ternary-confounder worked example used for golden values and MNARex draws.

U is income (0 = low), and low-income individuals report it far more often.
"""

from .probcore import CausalModel

P_U = (0.4, 0.5, 0.1)
P_E1_GIVEN_U = (0.3, 0.1, 0.2)
P_D1_GIVEN_EU = ((0.1, 0.9, 0.7), (0.8, 0.3, 0.2))
P_R1_GIVEN_EU = ((0.1, 0.95, 0.85), (0.2, 0.8, 0.9))


def example_model() -> CausalModel:
    return CausalModel(P_U, P_E1_GIVEN_U, P_D1_GIVEN_EU, P_R1_GIVEN_EU)
