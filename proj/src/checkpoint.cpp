#include "regulo/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <vector>

#include "regulo/error.hpp"
#include "sha256.hpp"

namespace regulo {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8;
constexpr std::size_t kFlushBytes = std::size_t{1} << 20;

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

// Streams header and body through `sink` in bounded chunks.
void serialize(const DensePolynomial& p,
               const std::function<void(std::span<const std::uint8_t>)>& sink) {
  std::vector<std::uint8_t> buf;
  buf.reserve(kFlushBytes + 4096);
  buf.insert(buf.end(), kCheckpointMagic.begin(), kCheckpointMagic.end());
  put_u32(buf, kCheckpointVersion);
  put_u32(buf, static_cast<std::uint32_t>(p.params().k));
  put_u32(buf, static_cast<std::uint32_t>(p.params().m));
  put_u64(buf, p.params().N);

  const CoefficientArray& c = p.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    const auto limbs = c.entry(n);
    std::size_t bytes = 8 * limbs.size();
    while (bytes > 0 && ((limbs[(bytes - 1) / 8] >> (8 * ((bytes - 1) % 8))) & 0xFF) == 0) --bytes;
    put_u32(buf, static_cast<std::uint32_t>(bytes));
    for (std::size_t b = 0; b < bytes; ++b) {
      buf.push_back(static_cast<std::uint8_t>(limbs[b / 8] >> (8 * (b % 8))));
    }
    if (buf.size() >= kFlushBytes) {
      sink(buf);
      buf.clear();
    }
  }
  sink(buf);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void read(std::uint8_t* out, std::size_t n, const char* what) {
    in_.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorKind::corrupt_checkpoint, std::string("truncated while reading ") + what);
    }
    hash_.update(out, n);
  }

  detail::Sha256::Digest digest() { return hash_.finish(); }

 private:
  std::istream& in_;
  detail::Sha256 hash_;
};

}  // namespace

void write_checkpoint(const DensePolynomial& p, std::ostream& out) {
  detail::Sha256 hash;
  serialize(p, [&](std::span<const std::uint8_t> bytes) {
    hash.update(bytes);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  });
  const auto d = hash.finish();
  out.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size()));
  if (!out) throw Error(ErrorKind::io_error, "checkpoint write failed");
}

DensePolynomial read_checkpoint(std::istream& in) {
  Reader reader(in);
  std::uint8_t header[kHeaderBytes];
  reader.read(header, kHeaderBytes, "header");
  if (!std::equal(kCheckpointMagic.begin(), kCheckpointMagic.end(), header)) {
    throw Error(ErrorKind::corrupt_checkpoint, "bad magic bytes");
  }
  const std::uint32_t version = get_u32(header + 4);
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::version_mismatch, "checkpoint format version " + std::to_string(version) +
                                                 ", expected " +
                                                 std::to_string(kCheckpointVersion));
  }
  const std::uint32_t k = get_u32(header + 8);
  const std::uint32_t m = get_u32(header + 12);
  const std::uint64_t n_total = get_u64(header + 16);
  PolyParams params;
  try {
    params = PolyParams::make(k, m);
  } catch (const Error& e) {
    throw Error(ErrorKind::corrupt_checkpoint, std::string("bad parameters: ") + e.what());
  }
  if (params.N != n_total) {
    throw Error(ErrorKind::corrupt_checkpoint, "header N does not match k and m");
  }

  const std::size_t stride =
      CoefficientArray::limbs_for_bits(static_cast<std::size_t>(params.factor_count()) + 1);
  const std::size_t length = params.N + 1;
  std::vector<std::uint64_t> limbs(length * stride, 0);
  std::vector<std::uint8_t> bytes(stride * 8);
  for (std::size_t n = 0; n < length; ++n) {
    std::uint8_t len_buf[4];
    reader.read(len_buf, 4, "coefficient length");
    const std::uint32_t len = get_u32(len_buf);
    if (len > stride * 8) {
      throw Error(ErrorKind::corrupt_checkpoint,
                  "coefficient " + std::to_string(n) + " exceeds the 2^F magnitude bound");
    }
    reader.read(bytes.data(), len, "coefficient bytes");
    std::uint64_t* dst = limbs.data() + n * stride;
    for (std::uint32_t b = 0; b < len; ++b) {
      dst[b / 8] |= static_cast<std::uint64_t>(bytes[b]) << (8 * (b % 8));
    }
  }

  const auto expected = reader.digest();
  std::array<std::uint8_t, 32> footer{};
  in.read(reinterpret_cast<char*>(footer.data()), footer.size());
  if (static_cast<std::size_t>(in.gcount()) != footer.size()) {
    throw Error(ErrorKind::corrupt_checkpoint, "truncated digest footer");
  }
  if (footer != expected) throw Error(ErrorKind::corrupt_checkpoint, "digest mismatch");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::corrupt_checkpoint, "trailing bytes after digest");
  }
  return DensePolynomial(params, CoefficientArray::from_raw(std::move(limbs), length, stride));
}

void save_checkpoint(const DensePolynomial& p, const std::filesystem::path& destination) {
  auto tmp = destination;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot open " + tmp.string() + " for writing");
    write_checkpoint(p, out);
    out.flush();
    if (!out) throw Error(ErrorKind::io_error, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, destination, ec);
  if (ec) throw Error(ErrorKind::io_error, "rename to " + destination.string() + ": " + ec.message());
}

DensePolynomial load_checkpoint(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + source.string());
  return read_checkpoint(in);
}

std::string polynomial_digest(const DensePolynomial& p) {
  detail::Sha256 hash;
  serialize(p, [&](std::span<const std::uint8_t> bytes) { hash.update(bytes); });
  return detail::Sha256::hex(hash.finish());
}

}  // namespace regulo
