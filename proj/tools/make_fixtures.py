#!/usr/bin/env python3
# Copyright 2026 The EdgeSlice Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Writes the bundled model fixtures.

The large fixtures are layer-level sketches of well-known image models: the
topology follows the published block structure, output sizes are the real
tensor sizes at batch 1, and memory is 4 bytes per parameter plus 4 bytes per
output element. Nothing here is random, so reruns are byte-identical.
"""

import argparse
import json
import pathlib

FORMAT = "edgeslice-model/1"


class Builder:

  def __init__(self):
    self.layers = []
    self.edges = []

  def add(self, name, elements, params=0, inputs=()):
    self.layers.append({
        "id": name,
        "output_elements": int(elements),
        "memory_bytes": int(4 * params + 4 * elements),
    })
    for src in inputs:
      self.edges.append({"from": src, "to": name})
    return name

  def doc(self):
    return {"format": FORMAT, "layers": self.layers, "edges": self.edges}


def conv(cin, cout, k=1):
  """Weights plus bias; `k` is a side length or a (height, width) pair."""
  kh, kw = k if isinstance(k, tuple) else (k, k)
  return kh * kw * cin * cout + cout


def chain():
  b = Builder()
  prev = b.add("input", 4096)
  for i, size in enumerate([2048, 1024, 512, 256, 10], start=1):
    prev = b.add(f"l{i}", size, params=size * 8, inputs=[prev])
  return b.doc()


def diamond():
  b = Builder()
  b.add("a", 1000)
  b.add("b", 500, params=1000, inputs=["a"])
  b.add("c", 400, params=1000, inputs=["a"])
  b.add("d", 100, params=500, inputs=["b", "c"])
  return b.doc()


def resnet50_like():
  b = Builder()
  # Paper input size (224 x 224 x 3 would be 150528).
  prev = b.add("input", 150328)
  prev = b.add("conv1", 112 * 112 * 64, conv(3, 64, 7), [prev])
  prev = b.add("pool1", 56 * 56 * 64, 0, [prev])
  cin = 64
  stages = [(3, 64, 56), (4, 128, 28), (6, 256, 14), (3, 512, 7)]
  for s, (blocks, width, hw) in enumerate(stages, start=2):
    cout = width * 4
    for i in range(blocks):
      p = f"res{s}{chr(ord('a') + i)}"
      a = b.add(p + "_1x1a", hw * hw * width, conv(cin, width), [prev])
      m = b.add(p + "_3x3", hw * hw * width, conv(width, width, 3), [a])
      c = b.add(p + "_1x1c", hw * hw * cout, conv(width, cout), [m])
      if i == 0:
        short = b.add(p + "_proj", hw * hw * cout, conv(cin, cout), [prev])
      else:
        short = prev
      prev = b.add(p + "_add", hw * hw * cout, 0, [c, short])
      cin = cout
  prev = b.add("avg_pool", 2048, 0, [prev])
  b.add("fc1000", 1000, 2048 * 1000 + 1000, [prev])
  return b.doc()


def inception_resnet_v2_like():
  b = Builder()
  prev = b.add("input", 299 * 299 * 3)
  stem = [
      ("stem_conv1", 149 * 149 * 32, conv(3, 32, 3)),
      ("stem_conv2", 147 * 147 * 32, conv(32, 32, 3)),
      ("stem_conv3", 147 * 147 * 64, conv(32, 64, 3)),
      ("stem_pool1", 73 * 73 * 64, 0),
      ("stem_conv4", 73 * 73 * 80, conv(64, 80)),
      ("stem_conv5", 71 * 71 * 192, conv(80, 192, 3)),
      ("stem_pool2", 35 * 35 * 192, 0),
  ]
  for name, elems, params in stem:
    prev = b.add(name, elems, params, [prev])

  def branchy(prefix, x, hw, cin, branches, concat_ch):
    """Parallel conv branches joined by a concat; returns the concat."""
    tails = []
    for j, spec in enumerate(branches):
      node, ch = x, cin
      for k, (cout, ksize) in enumerate(spec):
        # A zero kernel stands for a pooling branch.
        params = conv(ch, cout, ksize) if ksize else 0
        node = b.add(f"{prefix}_b{j}_{k}", hw * hw * cout, params, [node])
        ch = cout
      tails.append(node)
    return b.add(f"{prefix}_concat", hw * hw * concat_ch, 0, tails)

  prev = branchy("mixed_5b", prev, 35, 192,
                 [[(96, 1)], [(48, 1), (64, 5)],
                  [(64, 1), (96, 3), (96, 3)], [(64, 1)]], 320)

  def residual(prefix, x, hw, ch, branches, concat_ch):
    cat = branchy(prefix, x, hw, ch, branches, concat_ch)
    up = b.add(f"{prefix}_up", hw * hw * ch, conv(concat_ch, ch), [cat])
    return b.add(f"{prefix}_add", hw * hw * ch, 0, [up, x])

  for i in range(10):
    prev = residual(f"block35_{i + 1}", prev, 35, 320,
                    [[(32, 1)], [(32, 1), (32, 3)],
                     [(32, 1), (48, 3), (64, 3)]], 128)
  prev = branchy("mixed_6a", prev, 17, 320,
                 [[(384, 3)], [(256, 1), (256, 3), (384, 3)], [(320, 1)]],
                 1088)
  for i in range(20):
    prev = residual(f"block17_{i + 1}", prev, 17, 1088,
                    [[(192, 1)], [(128, 1), (160, (1, 7)), (192, (7, 1))]],
                    384)
  prev = branchy("mixed_7a", prev, 8, 1088,
                 [[(256, 1), (384, 3)], [(256, 1), (288, 3)],
                  [(256, 1), (288, 3), (320, 3)], [(1088, 0)]], 2080)
  for i in range(10):
    prev = residual(f"block8_{i + 1}", prev, 8, 2080,
                    [[(192, 1)], [(192, 1), (224, (1, 3)), (256, (3, 1))]],
                    448)
  prev = b.add("conv_7b", 8 * 8 * 1536, conv(2080, 1536), [prev])
  prev = b.add("avg_pool", 1536, 0, [prev])
  b.add("predictions", 1000, 1536 * 1000 + 1000, [prev])
  return b.doc()


def nasnet_like():
  """Two interleaved cell chains; every depth is shared by both chains."""
  b = Builder()
  b.add("input", 331 * 331 * 3)
  cells = 12
  for i in range(cells):
    for side, other in (("left", "right"), ("right", "left")):
      inputs = ["input"] if i == 0 else [f"{side}_{i - 1}", f"{other}_{i - 1}"]
      b.add(f"{side}_{i}", 42 * 42 * 168, conv(168, 168, 3), inputs)
  b.add("predictions", 1000, 2 * 168 * 1000 + 1000,
        [f"left_{cells - 1}", f"right_{cells - 1}"])
  return b.doc()


FIXTURES = {
    "chain": chain,
    "diamond": diamond,
    "resnet50_like": resnet50_like,
    "inception_resnet_v2_like": inception_resnet_v2_like,
    "nasnet_like": nasnet_like,
}


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument("--out-dir",
                      default=pathlib.Path(__file__).parent.parent / "fixtures",
                      type=pathlib.Path)
  args = parser.parse_args()
  args.out_dir.mkdir(parents=True, exist_ok=True)
  for name, fn in FIXTURES.items():
    doc = fn()
    path = args.out_dir / f"{name}.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    total = sum(l["memory_bytes"] for l in doc["layers"]) / 2**20
    print(f"{path.name}: {len(doc['layers'])} layers, {total:.1f} MiB")


if __name__ == "__main__":
  main()
