import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hca import kernels  # noqa: E402
from hca.normalize import load_config  # noqa: E402


@pytest.fixture(scope="session")
def default_cfg():
    return load_config()


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return kernels.load_backend(request.param)


@pytest.fixture(scope="session")
def planted_dir(tmp_path_factory):
    from hca.synth import generate

    root = tmp_path_factory.mktemp("planted")
    generate().write(root)
    return root
