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

#include "hgnn/blockdev/simulated_ssd.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <bit>
#include <cerrno>
#include <cstring>

namespace hgnn {

namespace {

constexpr char kMagic[8] = {'H', 'G', 'N', 'N', 'S', 'S', 'D', '\0'};

std::string ErrnoText(const std::string& what, const std::filesystem::path& path) {
  return what + " " + path.string() + ": " + std::strerror(errno);
}

void PreadFull(int fd, uint8_t* buf, size_t len, off_t off) {
  while (len > 0) {
    ssize_t n = ::pread(fd, buf, len, off);
    if (n < 0) {
      if (errno == EINTR) continue;
      Throw(Errc::kIo, std::string("pread failed: ") + std::strerror(errno));
    }
    if (n == 0) Throw(Errc::kIo, "pread hit end of image");
    buf += n;
    len -= static_cast<size_t>(n);
    off += n;
  }
}

void PwriteFull(int fd, const uint8_t* buf, size_t len, off_t off) {
  while (len > 0) {
    ssize_t n = ::pwrite(fd, buf, len, off);
    if (n < 0) {
      if (errno == EINTR) continue;
      Throw(Errc::kIo, std::string("pwrite failed: ") + std::strerror(errno));
    }
    buf += n;
    len -= static_cast<size_t>(n);
    off += n;
  }
}

}  // namespace

void DeviceGeometry::Validate() const {
  if (page_size < 512 || !std::has_single_bit(page_size)) {
    Throw(Errc::kInvalidArgument,
          "page_size must be a power of two >= 512, got " + std::to_string(page_size));
  }
  if (page_count < 16) {
    Throw(Errc::kInvalidArgument,
          "page_count must be >= 16, got " + std::to_string(page_count));
  }
}

IoCounterSet& IoCounterSet::operator+=(const IoCounterSet& o) {
  pages_read += o.pages_read;
  pages_written += o.pages_written;
  pages_trimmed += o.pages_trimmed;
  rmw_count += o.rmw_count;
  return *this;
}

IoCounterSet operator-(const IoCounterSet& a, const IoCounterSet& b) {
  return IoCounterSet{a.pages_read - b.pages_read, a.pages_written - b.pages_written,
                      a.pages_trimmed - b.pages_trimmed, a.rmw_count - b.rmw_count};
}

IoCounters operator-(const IoCounters& a, const IoCounters& b) {
  IoCounters out;
  out.total = a.total - b.total;
  for (const auto& [tag, set] : a.by_tag) {
    const IoCounterSet d = set - b.Tag(tag);
    if (!(d == IoCounterSet{})) out.by_tag.emplace(tag, d);
  }
  return out;
}

IoCounterSet IoCounters::Tag(std::string_view tag) const {
  auto it = by_tag.find(tag);
  return it == by_tag.end() ? IoCounterSet{} : it->second;
}

SimulatedSsd::SimulatedSsd(DeviceGeometry geometry, int fd)
    : geometry_(std::move(geometry)), fd_(fd) {}

SimulatedSsd::~SimulatedSsd() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<SimulatedSsd> SimulatedSsd::Create(const DeviceGeometry& geometry) {
  geometry.Validate();
  int fd = ::open(geometry.image_path.c_str(), O_RDWR | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) Throw(Errc::kIo, ErrnoText("cannot create image", geometry.image_path));

  std::array<uint8_t, kSsdHeaderSize> header{};
  std::memcpy(header.data(), kMagic, sizeof(kMagic));
  StoreLe<uint32_t>(header.data() + 8, kSsdImageVersion);
  StoreLe<uint32_t>(header.data() + 12, geometry.page_size);
  StoreLe<uint64_t>(header.data() + 16, geometry.page_count);

  const off_t total = static_cast<off_t>(kSsdHeaderSize) +
                      static_cast<off_t>(geometry.page_size) *
                          static_cast<off_t>(geometry.page_count);
  try {
    // ftruncate extends with zeros, which is the fresh-device content.
    if (::ftruncate(fd, total) != 0) {
      Throw(Errc::kIo, ErrnoText("cannot size image", geometry.image_path));
    }
    PwriteFull(fd, header.data(), header.size(), 0);
  } catch (...) {
    ::close(fd);
    throw;
  }
  return std::unique_ptr<SimulatedSsd>(new SimulatedSsd(geometry, fd));
}

std::unique_ptr<SimulatedSsd> SimulatedSsd::Open(const std::filesystem::path& path) {
  int fd = ::open(path.c_str(), O_RDWR | O_CLOEXEC);
  if (fd < 0) Throw(Errc::kIo, ErrnoText("cannot open image", path));
  DeviceGeometry geometry;
  geometry.image_path = path;
  try {
    std::array<uint8_t, kSsdHeaderSize> header{};
    PreadFull(fd, header.data(), header.size(), 0);
    if (std::memcmp(header.data(), kMagic, sizeof(kMagic)) != 0) {
      Throw(Errc::kDataLoss, "not an SSD image: " + path.string());
    }
    uint32_t version = LoadLe<uint32_t>(header.data() + 8);
    if (version != kSsdImageVersion) {
      Throw(Errc::kDataLoss, "unsupported image version " + std::to_string(version));
    }
    geometry.page_size = LoadLe<uint32_t>(header.data() + 12);
    geometry.page_count = LoadLe<uint64_t>(header.data() + 16);
    geometry.Validate();
    struct stat st {};
    if (::fstat(fd, &st) != 0) Throw(Errc::kIo, ErrnoText("cannot stat image", path));
    const auto expected = kSsdHeaderSize + uint64_t{geometry.page_size} * geometry.page_count;
    if (static_cast<uint64_t>(st.st_size) < expected) {
      Throw(Errc::kDataLoss, "image shorter than its header claims: " + path.string());
    }
  } catch (...) {
    ::close(fd);
    throw;
  }
  return std::unique_ptr<SimulatedSsd>(new SimulatedSsd(geometry, fd));
}

void SimulatedSsd::CheckLpn(Lpn lpn) const {
  if (lpn >= geometry_.page_count) {
    Throw(Errc::kOutOfRange, "lpn " + std::to_string(lpn) + " out of range (page_count " +
                                 std::to_string(geometry_.page_count) + ")");
  }
}

void SimulatedSsd::Count(std::string_view tag, IoCounterSet delta) {
  std::lock_guard lock(counters_mu_);
  counters_.total += delta;
  auto it = counters_.by_tag.find(tag);
  if (it == counters_.by_tag.end()) {
    it = counters_.by_tag.emplace(std::string(tag), IoCounterSet{}).first;
  }
  it->second += delta;
}

Bytes SimulatedSsd::ReadPage(Lpn lpn, std::string_view tag) {
  Bytes page(geometry_.page_size);
  ReadPage(lpn, page, tag);
  return page;
}

void SimulatedSsd::ReadPage(Lpn lpn, MutableByteSpan out, std::string_view tag) {
  CheckLpn(lpn);
  if (out.size() != geometry_.page_size) {
    Throw(Errc::kInvalidArgument, "read buffer must be exactly one page");
  }
  std::shared_lock lock(io_mu_);
  PreadFull(fd_, out.data(), out.size(),
            static_cast<off_t>(kSsdHeaderSize + lpn * geometry_.page_size));
  Count(tag, IoCounterSet{.pages_read = 1});
}

void SimulatedSsd::WritePage(Lpn lpn, ByteSpan data, std::string_view tag) {
  CheckLpn(lpn);
  if (data.size() != geometry_.page_size) {
    Throw(Errc::kInvalidArgument, "write of " + std::to_string(data.size()) +
                                      " bytes; page_size is " +
                                      std::to_string(geometry_.page_size));
  }
  std::unique_lock lock(io_mu_);
  PwriteFull(fd_, data.data(), data.size(),
             static_cast<off_t>(kSsdHeaderSize + lpn * geometry_.page_size));
  Count(tag, IoCounterSet{.pages_written = 1});
}

void SimulatedSsd::Trim(Lpn lpn, std::string_view tag) {
  CheckLpn(lpn);
  Bytes zeros(geometry_.page_size, 0);
  std::unique_lock lock(io_mu_);
  PwriteFull(fd_, zeros.data(), zeros.size(),
             static_cast<off_t>(kSsdHeaderSize + lpn * geometry_.page_size));
  Count(tag, IoCounterSet{.pages_trimmed = 1});
}

void SimulatedSsd::NoteRmw(std::string_view tag) { Count(tag, IoCounterSet{.rmw_count = 1}); }

IoCounters SimulatedSsd::SnapshotCounters() const {
  std::lock_guard lock(counters_mu_);
  return counters_;
}

void SimulatedSsd::ResetCounters() {
  std::lock_guard lock(counters_mu_);
  counters_ = IoCounters{};
}

}  // namespace hgnn
