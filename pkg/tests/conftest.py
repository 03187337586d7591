import pytest

from seriesfit import BaseModel, InputTransform, ModelMetadata, SeriesModel, Term

# Six-term sine series used by the eclipse demo docs; base 237.23, identity g.
SIX_TERM_COEFFS = ((11.02, 1.00), (-8.33, 1.14), (4.58, 0.88), (-2.20, 1.31), (-1.81, 1.61), (1.53, 1.07))


@pytest.fixture
def six_term_model() -> SeriesModel:
    terms = tuple(Term("sine", beta, alpha) for alpha, beta in SIX_TERM_COEFFS)
    return SeriesModel(
        base=BaseModel("constant", (237.23,)),
        transform=InputTransform(),
        terms=terms,
        metadata=ModelMetadata(iterations=6, final_ss=301.62),
    )
