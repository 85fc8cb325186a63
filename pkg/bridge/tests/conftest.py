import numpy as np
import pytest
import torch

# Embedding/latent shapes shared by the toy generator and the plan fixtures.
LATENT_DIM = 16
WORD_COUNT = 3
WORD_DIM = 8
SENT_DIM = 6
IMAGE_SIZE = 32


class ToyGenerator(torch.nn.Module):
    """Stand-in conditional generator: linear map + tanh to NCHW in [-1, 1]."""

    def __init__(self):
        super().__init__()
        torch.manual_seed(0)
        self.size = IMAGE_SIZE
        self.proj = torch.nn.Linear(LATENT_DIM + WORD_DIM + SENT_DIM, 3 * IMAGE_SIZE * IMAGE_SIZE)

    def forward(self, z: torch.Tensor, words: torch.Tensor, sentence: torch.Tensor) -> torch.Tensor:
        u = torch.cat([z, words.mean(dim=1), sentence], dim=1)
        x = torch.tanh(self.proj(u))
        return x.view(-1, 3, self.size, self.size)


@pytest.fixture(scope="session")
def generator_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("weights") / "toygen.pt"
    torch.jit.script(ToyGenerator()).save(str(path))
    return path


@pytest.fixture(scope="session")
def vgg_weights_path(tmp_path_factory):
    """Randomly initialized VGG-16 features trunk saved as a state dict.

    Shapes, ordering, and determinism of extraction do not depend on the
    trained values, so tests run without the pretrained download.
    """
    from torchvision.models import vgg16

    torch.manual_seed(1)
    path = tmp_path_factory.mktemp("weights") / "vgg16-features.pth"
    torch.save(vgg16(weights=None).features.state_dict(), str(path))
    return path


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(2024)


def write_latent_plan(path, steps=10, kind="lerp", seed=5):
    """Build a latent plan file with the toolkit and return (path, n_points)."""
    import latentprobe as lp

    r = np.random.default_rng(seed)
    if kind == "lerp":
        plan = lp.lerp_latent(r.standard_normal(LATENT_DIM), r.standard_normal(LATENT_DIM), steps)
    else:
        plan = lp.tri_latent(*(r.standard_normal(LATENT_DIM) for _ in range(3)), steps)
    lp.write_plan(plan, path)
    return path, len(plan.points)


def write_linguistic_plan(path, steps=4, seed=9):
    import latentprobe as lp

    r = np.random.default_rng(seed)
    cond = lambda: (r.standard_normal((WORD_COUNT, WORD_DIM)), r.standard_normal(SENT_DIM))
    plan = lp.lerp_linguistic(r.standard_normal(LATENT_DIM), cond(), cond(), steps)
    lp.write_plan(plan, path)
    return path, len(plan.points)


def write_text_metadata(path, seed=11):
    import json

    r = np.random.default_rng(seed)
    doc = {
        "words": r.standard_normal((WORD_COUNT, WORD_DIM)).tolist(),
        "sentence": r.standard_normal(SENT_DIM).tolist(),
    }
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def image_dir(tmp_path, rng):
    """Six small PNGs with deterministic content."""
    from PIL import Image

    directory = tmp_path / "images"
    directory.mkdir()
    for i in range(6):
        pixels = rng.integers(0, 256, size=(40, 40, 3), dtype=np.uint8)
        Image.fromarray(pixels).save(directory / f"img-{i:02d}.png")
    return directory
