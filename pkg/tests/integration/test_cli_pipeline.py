"""
Integration tests for the command-line pipeline.

Each test drives mole.main() the way a provider or developer would,
through files in a scratch working directory.
"""
import json

import numpy as np
import pytest

import mole
from core.file_formats import (
    read_image,
    read_kernels,
    read_matrix,
    read_pairs,
    read_rows,
    read_tensors,
    write_tensors,
)
from modules.augconv.layer import ChannelPermutation, unpermute_features
from modules.d2r.lowering import conv_direct
from modules.d2r.tensors import FeatureTensor, ImageTensor, KernelSet
from modules.morphing.secret_store import load_secret


def run(capsys, *argv):
    """Run one command with JSON output; return (exit code, parsed report)."""
    capsys.readouterr()
    code = mole.main([*argv, '--format', 'json'])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.mark.integration
class TestProviderFlow:
    """Test suite for keygen, morph and unmorph."""

    def test_morph_round_trip(self, workspace, write_ppm, capsys):
        """Morphing then unmorphing restores the images."""
        # Setup
        images = [write_ppm(workspace / f"img{i}.ppm", seed=i) for i in range(3)]
        code, report = run(capsys, 'keygen', '--alpha', '3', '--m', '8', '--kappa', '4', '--seed', '11', '--out', 's.json')
        assert code == 0
        assert report['q'] == 48
        assert (workspace / 's.mprime.mat').exists()

        # Test
        code, report = run(capsys, 'morph', '--secret', 's.json', '--images', *map(str, images), '--out', 'm.rows')
        assert code == 0 and report['count'] == 3
        code, _ = run(capsys, 'unmorph', '--secret', 's.json', '--rows', 'm.rows', '--out', 'r.rows')

        # Verify
        assert code == 0
        originals = np.stack([read_image(p).reshape(-1) for p in images])
        morphed = read_rows(workspace / 'm.rows')
        assert not np.allclose(morphed, originals)
        np.testing.assert_allclose(read_rows(workspace / 'r.rows'), originals, atol=1e-8)

    def test_same_seed_same_core(self, workspace, capsys):
        """keygen is deterministic in the seed."""
        for name in ('a.json', 'b.json'):
            code, _ = run(capsys, 'keygen', '--alpha', '1', '--m', '4', '--kappa', '2', '--seed', '5', '--out', name)
            assert code == 0
        assert np.array_equal(read_matrix(workspace / 'a.mprime.mat').data, read_matrix(workspace / 'b.mprime.mat').data)

    def test_kappa_must_divide(self, workspace, capsys):
        """A κ that does not divide αm² is a usage error."""
        code, report = run(capsys, 'keygen', '--kappa', '7', '--alpha', '1', '--m', '4', '--out', 's.json')
        assert code == 2
        assert report is None
        assert not (workspace / 's.json').exists()

    def test_security_verdict(self, workspace, capsys):
        """κ above κ_max is reported as insecure but still generated."""
        code, report = run(capsys, 'keygen', '--alpha', '3', '--m', '8', '--kappa', '64', '--p', '3', '--out', 's.json')
        assert code == 0
        assert report['kappa_max'] is not None
        assert report['security'] == 'insecure'

    def test_geometry_mismatch(self, workspace, write_ppm, capsys):
        """An image of the wrong size is rejected."""
        image = write_ppm(workspace / 'big.ppm', m=16)
        run(capsys, 'keygen', '--alpha', '3', '--m', '8', '--kappa', '4', '--out', 's.json')
        code, _ = run(capsys, 'morph', '--secret', 's.json', '--images', str(image), '--out', 'm.rows')
        assert code == 2

    def test_missing_secret(self, workspace, capsys):
        code, _ = run(capsys, 'unmorph', '--secret', 'absent.json', '--rows', 'm.rows', '--out', 'r.rows')
        assert code != 0


@pytest.mark.integration
class TestDeveloperFlow:
    """Test suite for kernels, build-augconv, conv-matrix and apply."""

    def test_augconv_on_morphed_equals_conv_on_originals(self, workspace, write_ppm, capsys):
        """Features from morphed rows match the direct convolution, after unpermuting."""
        # Setup
        images = [write_ppm(workspace / f"img{i}.ppm", seed=i) for i in range(2)]
        run(capsys, 'keygen', '--alpha', '3', '--m', '8', '--kappa', '2', '--beta', '4', '--seed', '3', '--out', 's.json')
        run(capsys, 'morph', '--secret', 's.json', '--images', *map(str, images), '--out', 'm.rows')
        code, _ = run(capsys, 'kernels', '--alpha', '3', '--beta', '4', '--p', '3', '--seed', '9', '--out', 'k.ker')
        assert code == 0

        # Test
        code, report = run(capsys, 'build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac.mat')
        assert code == 0
        assert report['n'] == 6 and report['beta'] == 4
        code, report = run(capsys, 'apply', '--augconv', 'ac.mat', '--rows', 'm.rows', '--out', 'f.ten')

        # Verify
        assert code == 0 and report['count'] == 2
        secret = load_secret(workspace / 's.json')
        perm = ChannelPermutation(4, secret.permutation)
        kernels = KernelSet.from_array(read_kernels(workspace / 'k.ker'))
        for path, data in zip(images, read_tensors(workspace / 'f.ten')):
            features = unpermute_features(FeatureTensor(4, 6, data), perm)
            expected = conv_direct(ImageTensor.from_array(read_image(path)), kernels)
            np.testing.assert_allclose(features.data, expected.data, atol=1e-8)

    def test_identity_secret_reproduces_conv_matrix(self, workspace, capsys):
        """With M′ = I and the identity order the layer is the plain convolution matrix."""
        run(capsys, 'keygen', '--alpha', '1', '--m', '6', '--kappa', '1', '--identity', '--beta', '2', '--out', 's.json')
        run(capsys, 'kernels', '--alpha', '1', '--beta', '2', '--p', '3', '--out', 'k.ker')
        assert run(capsys, 'build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac.mat')[0] == 0
        assert run(capsys, 'conv-matrix', '--kernels', 'k.ker', '--m', '6', '--out', 'c.mat')[0] == 0
        assert np.array_equal(read_matrix(workspace / 'ac.mat').data, read_matrix(workspace / 'c.mat').data)

    def test_permutation_saved_on_first_build(self, workspace, capsys):
        """A secret without an order gets one, derived from its seed."""
        run(capsys, 'keygen', '--alpha', '1', '--m', '4', '--kappa', '1', '--seed', '2', '--out', 's.json')
        assert load_secret(workspace / 's.json').permutation is None
        run(capsys, 'kernels', '--alpha', '1', '--beta', '3', '--p', '2', '--out', 'k.ker')
        run(capsys, 'build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac.mat')
        first = load_secret(workspace / 's.json').permutation
        assert sorted(first) == [0, 1, 2]
        run(capsys, 'build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac2.mat')
        assert load_secret(workspace / 's.json').permutation == first

    def test_empty_batch(self, workspace, capsys):
        """No input images give an empty morphed file and no features."""
        run(capsys, 'keygen', '--alpha', '1', '--m', '4', '--kappa', '1', '--beta', '2', '--out', 's.json')
        code, report = run(capsys, 'morph', '--secret', 's.json', '--out', 'm.rows')
        assert code == 0 and report['count'] == 0
        assert read_rows(workspace / 'm.rows').shape == (0, 16)
        run(capsys, 'kernels', '--alpha', '1', '--beta', '2', '--p', '2', '--out', 'k.ker')
        run(capsys, 'build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac.mat')
        code, report = run(capsys, 'apply', '--augconv', 'ac.mat', '--rows', 'm.rows', '--out', 'f.ten')
        assert code == 0 and report['count'] == 0
        assert read_tensors(workspace / 'f.ten') == []

    def test_kernel_channel_mismatch(self, workspace, capsys):
        run(capsys, 'keygen', '--alpha', '3', '--m', '4', '--kappa', '1', '--out', 's.json')
        run(capsys, 'kernels', '--alpha', '1', '--beta', '2', '--p', '2', '--out', 'k.ker')
        code, _ = run(capsys, 'build-augconv', '--secret', 's.json', '--kernels', 'k.ker', '--out', 'ac.mat')
        assert code == 2


@pytest.mark.integration
class TestAttackAndAnalysis:
    """Test suite for the attack and analyze commands."""

    def test_dtpair_recovers_core(self, workspace, capsys):
        """q general-position pairs recover M′."""
        # Setup
        gen = np.random.default_rng(4)
        paths = []
        for i in range(20):
            path = workspace / f"d{i}.ten"
            write_tensors(path, [gen.uniform(size=(1, 4, 4))])
            paths.append(str(path))
        run(capsys, 'keygen', '--alpha', '1', '--m', '4', '--kappa', '1', '--seed', '8', '--out', 's.json')
        run(capsys, 'morph', '--secret', 's.json', '--images', *paths, '--out', 'm.rows', '--pairs-out', 'p.pairs')
        originals, _ = read_pairs(workspace / 'p.pairs')
        assert originals.shape == (20, 16)

        # Test
        code, report = run(capsys, 'attack', 'dtpair', '--pairs', 'p.pairs', '--out', 'rec.mat',
                           '--truth', 's.mprime.mat')

        # Verify
        assert code == 0
        assert report['verdict'] == 'recovered'
        assert report['analysis']['max_relative_error'] < 1e-6
        assert report['trials'] == 20

    def test_dtpair_too_few_pairs(self, workspace, capsys):
        """Too few pairs is a usage error, never an attack verdict."""
        gen = np.random.default_rng(4)
        paths = []
        for i in range(5):
            path = workspace / f"d{i}.ten"
            write_tensors(path, [gen.uniform(size=(1, 4, 4))])
            paths.append(str(path))
        run(capsys, 'keygen', '--alpha', '1', '--m', '4', '--kappa', '1', '--out', 's.json')
        run(capsys, 'morph', '--secret', 's.json', '--images', *paths, '--out', 'm.rows', '--pairs-out', 'p.pairs')
        code, _ = run(capsys, 'attack', 'dtpair', '--pairs', 'p.pairs')
        assert code == 2

    def test_bruteforce(self, workspace, capsys):
        code, report = run(capsys, 'attack', 'bruteforce', '--alpha', '3', '--m', '32', '--kappa', '1', '--beta', '64')
        assert code == 0
        assert report['log2_prob']['p_m_bf'] == pytest.approx(-9_437_184)
        assert report['verdict'] == 'negligible'

    def test_reverse(self, workspace, capsys):
        """Reverse analysis defaults to same padding, so n equals m."""
        code, report = run(capsys, 'attack', 'reverse', '--alpha', '3', '--m', '32', '--p', '3', '--kappa', '1')
        assert code == 0
        assert report['geometry']['n'] == 32
        assert report['log2_prob']['p_m_ar'] == pytest.approx(-6_291_456, rel=1e-5)
        assert report['analysis']['n_equations'] == 1024
        assert report['analysis']['kappa_max'] == 3
        assert report['verdict'] == 'underdetermined'

    def test_reverse_insecure_kappa(self, workspace, capsys):
        code, report = run(capsys, 'attack', 'reverse', '--alpha', '3', '--m', '32', '--p', '3', '--kappa', '4')
        assert code == 0
        assert report['verdict'] == 'insecure-kappa'

    def test_reverse_valid_padding(self, workspace, capsys):
        """Explicit valid padding shrinks the output side to m − p + 1."""
        code, report = run(capsys, 'attack', 'reverse', '--alpha', '3', '--m', '32', '--p', '3', '--kappa', '1',
                           '--padding', 'valid')
        assert code == 0
        assert report['geometry']['n'] == 30
        assert report['analysis']['n_equations'] == 900

    def test_invalid_sigma(self, workspace, capsys):
        code, _ = run(capsys, 'attack', 'bruteforce', '--alpha', '3', '--m', '32', '--kappa', '1',
                      '--beta', '64', '--sigma', '1.5')
        assert code == 2

    def test_overhead(self, workspace, capsys):
        """Overhead defaults to same padding (n = m = 32)."""
        code, report = run(capsys, 'analyze', 'overhead', '--alpha', '3', '--m', '32', '--p', '3',
                           '--beta', '64', '--kappa', '1', '--dataset-elems', '184320000')
        assert code == 0
        assert report['data_elements'] == 9_437_184
        assert report['dev_macs'] == 199_557_120
        assert report['data_ratio'] == pytest.approx(0.0512)

    def test_ssim_identical(self, workspace, write_ppm, capsys):
        image = write_ppm(workspace / 'a.ppm', m=16)
        code, report = run(capsys, 'analyze', 'ssim', '--a', str(image), '--b', str(image))
        assert code == 0
        assert report['ssim'] == pytest.approx(1.0)

    def test_sweep_csv(self, workspace, write_ppm, capsys):
        """The sweep table is sorted by κ and mirrored to CSV."""
        image = write_ppm(workspace / 'a.pgm', alpha=1, m=8)
        code, rows = run(capsys, 'analyze', 'sweep', '--image', str(image), '--kappas', '1,64,4',
                         '--csv', 'sweep.csv', '--seed', '3')
        assert code == 0
        assert [(r['kappa'], r['q']) for r in rows] == [(64, 1), (4, 16), (1, 64)]
        lines = (workspace / 'sweep.csv').read_text().splitlines()
        assert lines[0] == 'kappa,q,ssim'
        assert len(lines) == 4

    def test_sweep_streams_cores_above_cap(self, workspace, write_ppm, monkeypatch, capsys):
        """A κ whose core exceeds MOLE_MAX_CORE still gets its row."""
        # Setup
        monkeypatch.setenv('MOLE_MAX_CORE', '16')
        image = write_ppm(workspace / 'a.pgm', alpha=1, m=8)

        # Test
        code, rows = run(capsys, 'analyze', 'sweep', '--image', str(image), '--kappas', '1,4', '--seed', '3')

        # Verify
        assert code == 0
        assert [(r['kappa'], r['q']) for r in rows] == [(4, 16), (1, 64)]

    def test_privacy_demo_rejects_core_above_cap(self, workspace, write_ppm, monkeypatch, capsys):
        """The privacy demo inverts its core, so the cap still applies there."""
        monkeypatch.setenv('MOLE_MAX_CORE', '16')
        image = write_ppm(workspace / 'a.pgm', alpha=1, m=8)
        code, _ = run(capsys, 'analyze', 'privacy', '--image', str(image), '--kappa', '1', '--sigmas', '0.5')
        assert code == 2

    def test_privacy_demo(self, workspace, write_ppm, capsys):
        image = write_ppm(workspace / 'a.pgm', alpha=1, m=8)
        code, rows = run(capsys, 'analyze', 'privacy', '--image', str(image), '--kappa', '4',
                         '--sigmas', '0.01,0.9', '--seed', '1')
        assert code == 0
        assert [r['sigma'] for r in rows] == [0.01, 0.9]
        assert rows[0]['ssim'] > rows[1]['ssim']

    def test_privacy_rejects_sigma_outside_unit_interval(self, workspace, write_ppm, capsys):
        image = write_ppm(workspace / 'a.pgm', alpha=1, m=8)
        code, _ = run(capsys, 'analyze', 'privacy', '--image', str(image), '--kappa', '4', '--sigmas', '0,0.5')
        assert code == 2

    def test_text_format_is_default(self, workspace, capsys):
        capsys.readouterr()
        code = mole.main(['attack', 'bruteforce', '--alpha', '1', '--m', '4', '--kappa', '1', '--beta', '2'])
        out = capsys.readouterr().out
        assert code == 0
        assert 'verdict: ' in out

    def test_unknown_command(self, workspace, capsys):
        assert mole.main(['frobnicate']) == 2


@pytest.mark.integration
class TestEntryPoint:
    """Test suite for mole.main() start-up."""

    def test_bad_settings_exit_before_commands(self, workspace, mocker, monkeypatch, capsys):
        """Malformed configuration is a usage error and no command runs."""
        # Setup
        monkeypatch.setenv('MOLE_WORKERS', 'many')
        loader = mocker.patch('mole.load_commands')

        # Test
        code = mole.main(['attack', 'bruteforce', '--alpha', '1', '--m', '4', '--kappa', '1', '--beta', '2'])

        # Verify
        assert code == 2
        loader.assert_not_called()
        assert 'MOLE_WORKERS' in capsys.readouterr().err

    def test_env_file_is_read(self, workspace, monkeypatch, capsys):
        """A .env in the working directory configures the run."""
        monkeypatch.setenv('MOLE_MAX_CORE', '1')
        monkeypatch.delenv('MOLE_MAX_CORE')
        (workspace / '.env').write_text('MOLE_MAX_CORE=8\n')
        code, _ = run(capsys, 'keygen', '--alpha', '1', '--m', '4', '--kappa', '1', '--out', 's.json')
        assert code == 2
