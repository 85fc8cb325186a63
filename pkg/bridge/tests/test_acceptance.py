"""Bridge acceptance: plan execution is checked structurally.

A 55-point triangular plan must yield 55 images named and listed in grid
order, with the point nearest the (1/3, 1/3) barycenter identifiable from the
manifest. Content is not judged perceptually; the toy TorchScript generator
stands in for the real one.
"""

import json

from latentprobe_bridge.generate import generate

from conftest import write_latent_plan, write_text_metadata


def test_triangular_plan_execution_structural(tmp_path, generator_path):
    plan_path, count = write_latent_plan(tmp_path / "plan.json", steps=10, kind="tri")
    text_path = write_text_metadata(tmp_path / "text.json")
    out_dir = tmp_path / "out"

    manifest = generate(plan_path, generator_path, out_dir, text_path=text_path)

    # 55 images on disk, one per plan point
    pngs = sorted(p.name for p in out_dir.glob("*.png"))
    assert len(pngs) == count == 55

    # manifest order is grid order: indices 0..54, files named by index
    assert [e["index"] for e in manifest["images"]] == list(range(55))
    assert [e["file"] for e in manifest["images"]] == pngs

    # the gamma pairs replay the triangular grid row-major
    import latentprobe as lp

    grid = [(m.gamma1, m.gamma2) for m in lp.tri_grid(10)]
    assert [(e["gamma1"], e["gamma2"]) for e in manifest["images"]] == grid

    # the three-way blend point is identifiable: nearest (1/3, 1/3) by index
    center = manifest["center_index"]
    assert center == lp.tri_center_index(10) == 30
    entry = manifest["images"][center]
    assert (entry["gamma1"], entry["gamma2"]) == (3 / 9, 3 / 9)

    # the manifest on disk carries the same structure
    on_disk = json.loads((out_dir / "manifest.json").read_text())
    assert on_disk["center_index"] == center
    assert on_disk["count"] == 55
    print("\nACCEPTANCE PASS: 55-point triangular plan execution (structural)")
