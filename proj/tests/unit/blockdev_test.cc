// Copyright 2026 The hgnn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <fstream>

#include "hgnn/blockdev/simulated_ssd.h"
#include "test_support.h"

namespace hgnn {
namespace {

using testing::MakeDevice;
using testing::ScratchDir;

TEST(DeviceGeometry, RejectsBadShapes) {
  DeviceGeometry g;
  g.page_count = 64;
  g.page_size = 1000;
  EXPECT_THROW(g.Validate(), Error);
  g.page_size = 256;
  EXPECT_THROW(g.Validate(), Error);
  g.page_size = 4096;
  g.page_count = 15;
  EXPECT_THROW(g.Validate(), Error);
  g.page_count = 16;
  EXPECT_NO_THROW(g.Validate());
}

TEST(SimulatedSsd, FreshDeviceReadsZero) {
  ScratchDir dir;
  auto dev = MakeDevice(dir, 512, 32);
  for (Lpn l = 0; l < 32; ++l) {
    Bytes page = dev->ReadPage(l, "t");
    EXPECT_EQ(page, Bytes(512, 0));
  }
}

TEST(SimulatedSsd, WriteReadRoundTripAndCounters) {
  ScratchDir dir;
  auto dev = MakeDevice(dir, 512, 32);
  Bytes data(512);
  for (size_t i = 0; i < data.size(); ++i) data[i] = static_cast<uint8_t>(i * 7);
  dev->WritePage(5, data, "w");
  EXPECT_EQ(dev->ReadPage(5, "r"), data);
  dev->NoteRmw("w");
  dev->Trim(5, "trim");
  EXPECT_EQ(dev->ReadPage(5, "r"), Bytes(512, 0));

  const IoCounters c = dev->SnapshotCounters();
  EXPECT_EQ(c.total.pages_written, 1u);
  EXPECT_EQ(c.total.pages_read, 2u);
  EXPECT_EQ(c.total.pages_trimmed, 1u);
  EXPECT_EQ(c.total.rmw_count, 1u);
  EXPECT_EQ(c.Tag("w").pages_written, 1u);
  EXPECT_EQ(c.Tag("w").rmw_count, 1u);
  EXPECT_EQ(c.Tag("r").pages_read, 2u);
  EXPECT_EQ(c.Tag("absent"), IoCounterSet{});

  dev->ResetCounters();
  EXPECT_EQ(dev->SnapshotCounters(), IoCounters{});
}

TEST(SimulatedSsd, TagTotalsSumToTotal) {
  ScratchDir dir;
  auto dev = MakeDevice(dir, 512, 64);
  std::mt19937_64 rng(3);
  Bytes page(512, 1);
  const char* tags[] = {"a", "b", "c"};
  for (int i = 0; i < 500; ++i) {
    const char* tag = tags[rng() % 3];
    const Lpn lpn = rng() % 64;
    switch (rng() % 4) {
      case 0: dev->WritePage(lpn, page, tag); break;
      case 1: dev->ReadPage(lpn, tag); break;
      case 2: dev->Trim(lpn, tag); break;
      default: dev->NoteRmw(tag); break;
    }
  }
  const IoCounters c = dev->SnapshotCounters();
  IoCounterSet sum;
  for (const auto& [tag, set] : c.by_tag) sum += set;
  EXPECT_EQ(sum, c.total);
}

TEST(SimulatedSsd, BoundsAndSizeChecks) {
  ScratchDir dir;
  auto dev = MakeDevice(dir, 512, 16);
  try {
    dev->ReadPage(16, "t");
    FAIL() << "expected out of range";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kOutOfRange);
  }
  try {
    dev->WritePage(0, Bytes(100), "t");
    FAIL() << "expected invalid argument";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidArgument);
  }
}

TEST(SimulatedSsd, ReopenPreservesContent) {
  ScratchDir dir;
  const std::string path = dir.File("dev.img");
  {
    auto dev = MakeDevice(dir, 1024, 20);
    dev->WritePage(19, Bytes(1024, 0xAB), "w");
  }
  auto dev = SimulatedSsd::Open(path);
  EXPECT_EQ(dev->page_size(), 1024u);
  EXPECT_EQ(dev->page_count(), 20u);
  EXPECT_EQ(dev->ReadPage(19, "r"), Bytes(1024, 0xAB));
  EXPECT_EQ(dev->SnapshotCounters().total.pages_written, 0u);
}

TEST(SimulatedSsd, OpenRejectsForeignFile) {
  ScratchDir dir;
  const std::string path = dir.File("junk.img");
  std::ofstream(path) << std::string(4096, 'x');
  try {
    SimulatedSsd::Open(path);
    FAIL() << "expected data loss";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDataLoss);
  }
  EXPECT_THROW(SimulatedSsd::Open(dir.File("missing.img")), Error);
}

}  // namespace
}  // namespace hgnn
