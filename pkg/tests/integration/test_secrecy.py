"""
Integration tests for what leaves the provider.

The developer receives the Aug-Conv matrix, its sidecar, morphed rows and
the features computed from them; none of these may carry M′, the channel
order or the seed.
"""
import json

import numpy as np
import pytest

import mole
from core.file_formats import read_matrix
from modules.augconv.sidecar import SIDECAR_KEYS

SECRET_FIELDS = ('seed', 'permutation', 'mprime_file', 'mprime', 'kappa', 'q')


@pytest.fixture
def delivered(workspace, write_ppm, capsys):
    """Run the provider side once and return the workspace."""
    images = [str(write_ppm(workspace / f"img{i}.ppm", alpha=1, m=8, seed=i)) for i in range(2)]
    steps = [
        ['keygen', '--alpha', '1', '--m', '8', '--kappa', '2', '--beta', '3', '--seed', '21', '--out', 's.json'],
        ['morph', '--secret', 's.json', '--images', *images, '--out', 'm.rows'],
        ['kernels', '--alpha', '1', '--beta', '3', '--p', '3', '--seed', '4', '--out', 'k.ker'],
        ['build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac.mat'],
    ]
    for argv in steps:
        assert mole.main(argv) == 0
    capsys.readouterr()
    return workspace


@pytest.mark.integration
class TestSecrecy:
    """Test suite for developer-facing artifacts."""

    def test_sidecar_holds_geometry_only(self, delivered):
        """The sidecar has exactly the public geometry fields."""
        meta = json.loads((delivered / 'ac.mat.json').read_text())
        assert set(meta) == SIDECAR_KEYS
        assert not set(meta) & set(SECRET_FIELDS)

    def test_core_bytes_absent(self, delivered):
        """No developer file contains the raw M′ payload."""
        # Setup
        mprime = read_matrix(delivered / 's.mprime.mat').data
        needle = mprime.astype('<f8').tobytes()[:64]

        # Test
        assert mole.main(['apply', '--augconv', 'ac.mat', '--rows', 'm.rows', '--out', 'f.ten']) == 0

        # Verify
        for name in ('ac.mat', 'ac.mat.json', 'm.rows', 'f.ten'):
            assert needle not in (delivered / name).read_bytes(), name

    def test_developer_runs_without_secret(self, delivered, capsys):
        """apply needs only the layer and the morphed rows."""
        (delivered / 's.json').unlink()
        (delivered / 's.mprime.mat').unlink()
        capsys.readouterr()
        assert mole.main(['apply', '--augconv', 'ac.mat', '--rows', 'm.rows', '--out', 'f.ten', '--format', 'json']) == 0
        report = json.loads(capsys.readouterr().out)
        assert report['count'] == 2
        assert not set(report) & set(SECRET_FIELDS)

    def test_layer_differs_from_convolution(self, delivered):
        """The shipped matrix is not the plain convolution matrix."""
        assert mole.main(['conv-matrix', '--kernels', 'k.ker', '--m', '8', '--out', 'c.mat']) == 0
        shipped = read_matrix(delivered / 'ac.mat').data
        plain = read_matrix(delivered / 'c.mat').data
        assert shipped.shape == plain.shape
        assert not np.allclose(shipped, plain)

    def test_developer_reports_carry_no_seed(self, delivered, capsys):
        capsys.readouterr()
        assert mole.main(['analyze', 'overhead', '--alpha', '1', '--m', '8', '--p', '3', '--beta', '3',
                          '--kappa', '2', '--format', 'json']) == 0
        report = json.loads(capsys.readouterr().out)
        assert 'seed' not in report and 'permutation' not in report
