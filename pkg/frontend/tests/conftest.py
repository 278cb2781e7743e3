from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]

# produced by the results CLI at (M=3, n=4): narrow limit 36, flat limit 21
REDUCED_FIG4 = """\
# dwmetro-results v1
param,value,qfi,cfi,method,seconds
sigma,0.05,36,,DiagonalProduct,0.139
sigma,0.5,33.6268903007,,DiagonalProduct,0.000
sigma,1,28.5100878694,,DiagonalProduct,0.000
sigma,2,22.9954037062,,DiagonalProduct,0.000
sigma,8,21.0125587293,,DiagonalProduct,0.000
sigma,inf,21,,DiagonalProduct,0.000
"""


@pytest.fixture(scope="session")
def fig3_csv():
    path = REPO_ROOT / "data" / "figure3.csv"
    assert path.exists(), f"shipped sample missing: {path}"
    return str(path)


@pytest.fixture(scope="session")
def fig4_csv():
    path = REPO_ROOT / "data" / "figure4.csv"
    assert path.exists(), f"shipped sample missing: {path}"
    return str(path)


@pytest.fixture()
def reduced_fig4_csv(tmp_path):
    path = tmp_path / "reduced_fig4.csv"
    path.write_text(REDUCED_FIG4)
    return str(path)
