// Prints the header of a binary embedding file without loading the data.
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: emb_info FILE\n");
    return 1;
  }
  std::ifstream f(argv[1], std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", argv[1]);
    return 1;
  }
  unsigned char header[24];
  if (!f.read(reinterpret_cast<char*>(header), sizeof(header))) {
    std::fprintf(stderr, "%s: shorter than a header\n", argv[1]);
    return 1;
  }
  if (std::memcmp(header, "EMB1", 4) != 0) {
    std::fprintf(stderr, "%s: not an EMB1 file\n", argv[1]);
    return 1;
  }
  auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | header[off + static_cast<std::size_t>(i)];
    return v;
  };
  std::uint64_t rows = 0;
  for (int i = 7; i >= 0; --i) rows = (rows << 8) | header[8 + i];
  const std::uint32_t version = u32(4);
  const std::uint32_t cols = u32(16);
  const unsigned dtype = header[20];

  f.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(f.tellg());
  const std::uint64_t elem = dtype == 0 ? 4 : 8;
  const std::uint64_t expect = 24 + rows * cols * elem;

  std::printf("file:    %s\n", argv[1]);
  std::printf("version: %u\n", version);
  std::printf("rows:    %llu\n", static_cast<unsigned long long>(rows));
  std::printf("cols:    %u\n", cols);
  std::printf("dtype:   %s\n", dtype == 0 ? "f32" : dtype == 1 ? "f64" : "unknown");
  std::printf("bytes:   %llu (expected %llu)\n",
              static_cast<unsigned long long>(size),
              static_cast<unsigned long long>(expect));
  return size == expect ? 0 : 1;
}
