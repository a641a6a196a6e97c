#include "rwr/index.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "rwr/errors.hpp"

namespace rwr {

namespace {

constexpr char kMagic[4] = {'K', 'D', 'S', 'H'};
constexpr std::size_t kHeaderSize = 64;

enum SectionTag : std::uint32_t {
  kOrderSection = 1,
  kMaxSection = 2,
  kSelfLoopSection = 3,
  kMatrixSection = 4,
  kLowerInverseSection = 5,
  kUpperInverseSection = 6,
  kLabelSection = 7,
};
constexpr std::uint32_t kSectionCount = 7;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::string_view s) { buf_.append(s); }

  std::string& buffer() noexcept { return buf_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string_view bytes(std::size_t len) {
    need(len);
    auto out = data_.substr(pos_, len);
    pos_ += len;
    return out;
  }

  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  void need(std::size_t len) const {
    if (remaining() < len) throw FormatError("index truncated");
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    auto len = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

void write_compressed(ByteWriter& w, const CompressedMatrix& m) {
  for (auto p : m.ptr) w.u64(p);
  for (auto i : m.idx) w.u32(i);
  for (auto v : m.val) w.f64(v);
}

CompressedMatrix read_compressed(ByteReader& r, NodeId n) {
  CompressedMatrix m;
  m.n = n;
  m.ptr.resize(std::size_t{n} + 1);
  for (auto& p : m.ptr) p = r.u64();
  if (m.ptr.front() != 0) throw FormatError("sparse section does not start at offset 0");
  for (NodeId k = 0; k < n; ++k) {
    if (m.ptr[k + 1] < m.ptr[k]) throw FormatError("sparse section offsets decrease");
  }
  const std::uint64_t nnz = m.ptr.back();
  if (nnz > r.remaining() / 12) throw FormatError("sparse section longer than payload");
  m.idx.resize(nnz);
  m.val.resize(nnz);
  for (auto& i : m.idx) i = r.u32();
  for (auto& v : m.val) v = r.f64();
  for (NodeId k = 0; k < n; ++k) {
    for (auto p = m.ptr[k]; p < m.ptr[k + 1]; ++p) {
      if (m.idx[p] >= n) throw FormatError("sparse index out of range");
      if (p > m.ptr[k] && m.idx[p] <= m.idx[p - 1]) throw FormatError("sparse indices unsorted");
    }
  }
  return m;
}

// Outer slot k must start with its diagonal and hold only inner >= k.
void check_triangular(const CompressedMatrix& m, const char* what) {
  for (NodeId k = 0; k < m.n; ++k) {
    auto ids = m.indices(k);
    if (ids.empty() || ids.front() != k) {
      throw FormatError(std::string(what) + " missing diagonal entry");
    }
  }
}

void put_section(ByteWriter& out, std::uint32_t tag, ByteWriter& body) {
  out.u32(tag);
  out.u64(body.buffer().size());
  out.bytes(body.buffer());
}

}  // namespace

const std::string& ProximityIndex::label(NodeId u) const {
  if (u >= labels_.size()) throw LookupError("node id " + std::to_string(u) + " out of range");
  return labels_[u];
}

std::optional<NodeId> ProximityIndex::find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

NodeId ProximityIndex::require(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw LookupError("unknown node '" + std::string(label) + "'");
}

bool operator==(const ProximityIndex& a, const ProximityIndex& b) {
  auto same_bits = [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  };
  return same_bits(a.c_, b.c_) && a.strategy_ == b.strategy_ &&
         same_bits(a.drop_tolerance_, b.drop_tolerance_) && a.kappa_ == b.kappa_ &&
         a.edge_count_ == b.edge_count_ && a.ordering_ == b.ordering_ && a.matrix_ == b.matrix_ &&
         a.self_loop_ == b.self_loop_ && a.lower_inv_ == b.lower_inv_ &&
         a.upper_inv_ == b.upper_inv_ && a.labels_ == b.labels_;
}

ProximityIndex assemble_index(double c, OrderingStrategy strategy, double drop_tolerance,
                              std::uint32_t kappa, std::uint64_t edge_count, Ordering ordering,
                              NormalizedMatrix matrix, InverseFactor lower_inv,
                              InverseFactor upper_inv, std::vector<std::string> labels) {
  const NodeId n = matrix.size();
  if (!(c > 0.0 && c < 1.0)) throw FormatError("restart probability outside (0, 1)");
  if (ordering.size() != n || lower_inv.size() != n || upper_inv.size() != n ||
      labels.size() != n || matrix.col_max.size() != n) {
    throw FormatError("index sections disagree on node count");
  }
  if (lower_inv.kind != TriangleKind::kLower || upper_inv.kind != TriangleKind::kUpper) {
    throw FormatError("inverse factors have the wrong orientation");
  }

  ProximityIndex idx;
  idx.c_ = c;
  idx.strategy_ = strategy;
  idx.drop_tolerance_ = drop_tolerance;
  idx.kappa_ = kappa;
  idx.edge_count_ = edge_count;
  idx.ordering_ = std::move(ordering);
  idx.matrix_ = std::move(matrix);
  idx.self_loop_.resize(n);
  idx.max_restart_factor_ = 1.0 - c;
  for (NodeId u = 0; u < n; ++u) {
    const double a_uu = idx.matrix_.self_loop(u);
    idx.self_loop_[u] = a_uu;
    idx.max_restart_factor_ = std::max(idx.max_restart_factor_, (1.0 - c) / (1.0 - a_uu + c * a_uu));
  }
  idx.lower_inv_ = std::move(lower_inv);
  idx.upper_inv_ = std::move(upper_inv);
  idx.labels_ = std::move(labels);
  idx.ids_.reserve(n);
  for (NodeId u = 0; u < n; ++u) {
    if (!idx.ids_.emplace(idx.labels_[u], u).second) throw FormatError("duplicate node label");
  }
  return idx;
}

ProximityIndex build_index(const Graph& g, const IndexOptions& opts, PrecomputeSummary* summary) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  NormalizedMatrix a = column_normalize(g);
  OrderingResult order = make_ordering(g, opts.strategy, opts.seed);
  NormalizedMatrix reordered = apply_ordering(a, order.ordering);
  SystemMatrix w = build_system(reordered, opts.c);
  LuFactors lu = crout_lu(w);
  InversionOptions inv_opts{opts.drop_tolerance};
  InverseFactor lower_inv = invert_lower(lu.lower, inv_opts);
  InverseFactor upper_inv = invert_upper(lu.upper, inv_opts);

  const std::uint32_t kappa = order.partitioning ? order.partitioning->kappa : 0;
  if (summary != nullptr) {
    summary->n = g.node_count();
    summary->m = g.edge_count();
    summary->kappa = order.partitioning ? std::optional(kappa) : std::nullopt;
    summary->border_size = order.partitioning ? order.partitioning->border_size() : 0;
    summary->nnz_lower_inverse = lower_inv.nnz();
    summary->nnz_upper_inverse = upper_inv.nnz();
  }
  auto idx = assemble_index(opts.c, opts.strategy, opts.drop_tolerance, kappa, g.edge_count(),
                            std::move(order.ordering), std::move(a), std::move(lower_inv),
                            std::move(upper_inv), g.labels());
  if (summary != nullptr) {
    summary->seconds = std::chrono::duration<double>(clock::now() - start).count();
  }
  return idx;
}

void print_summary(std::ostream& out, const PrecomputeSummary& s) {
  out << "n=" << s.n << " m=" << s.m;
  if (s.kappa) out << " kappa=" << *s.kappa << " border=" << s.border_size;
  out << " nnz_linv=" << s.nnz_lower_inverse << " nnz_uinv=" << s.nnz_upper_inverse
      << " nnz_ratio=" << s.nnz_ratio() << " seconds=" << s.seconds << '\n';
}

void save_index(std::ostream& out, const ProximityIndex& idx) {
  const NodeId n = idx.node_count();

  ByteWriter payload;
  {
    ByteWriter body;
    for (NodeId pos = 0; pos < n; ++pos) body.u32(idx.ordering().original(pos));
    put_section(payload, kOrderSection, body);
  }
  {
    ByteWriter body;
    body.f64(idx.global_max());
    for (double v : idx.matrix().col_max) body.f64(v);
    put_section(payload, kMaxSection, body);
  }
  {
    ByteWriter body;
    for (double v : idx.self_loops()) body.f64(v);
    put_section(payload, kSelfLoopSection, body);
  }
  {
    ByteWriter body;
    write_compressed(body, idx.matrix().columns);
    put_section(payload, kMatrixSection, body);
  }
  {
    ByteWriter body;
    write_compressed(body, idx.lower_inverse().storage);
    put_section(payload, kLowerInverseSection, body);
  }
  {
    ByteWriter body;
    write_compressed(body, idx.upper_inverse().storage);
    put_section(payload, kUpperInverseSection, body);
  }
  {
    ByteWriter body;
    for (const auto& label : idx.labels()) {
      body.u32(static_cast<std::uint32_t>(label.size()));
      body.bytes(label);
    }
    put_section(payload, kLabelSection, body);
  }

  ByteWriter header;
  header.bytes(std::string_view(kMagic, 4));
  header.u8(kIndexVersion);
  header.u8(static_cast<std::uint8_t>(idx.strategy()));
  header.u16(0);
  header.u32(n);
  header.u32(idx.kappa());
  header.u64(idx.edge_count());
  header.f64(idx.restart());
  header.f64(idx.drop_tolerance());
  header.u64(idx.lower_inverse().nnz());
  header.u64(idx.upper_inverse().nnz());
  header.u32(kSectionCount);
  header.u32(crc32_of(payload.buffer()));

  out.write(header.buffer().data(), static_cast<std::streamsize>(header.buffer().size()));
  out.write(payload.buffer().data(), static_cast<std::streamsize>(payload.buffer().size()));
  if (!out) throw Error("failed to write index");
}

void save_index(const std::filesystem::path& path, const ProximityIndex& idx) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_index(out, idx);
  out.flush();
  if (!out) throw Error("failed to write " + path.string());
}

ProximityIndex load_index(std::istream& in) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (data.size() < kHeaderSize) throw FormatError("index shorter than its header");
  if (std::memcmp(data.data(), kMagic, 4) != 0) throw FormatError("bad magic; not an index file");

  ByteReader header(std::string_view(data).substr(4, kHeaderSize - 4));
  const auto version = header.u8();
  if (version != kIndexVersion) {
    throw FormatError("unsupported index version " + std::to_string(version));
  }
  const auto strategy_tag = header.u8();
  if (strategy_tag > static_cast<std::uint8_t>(OrderingStrategy::kIdentity)) {
    throw FormatError("unknown ordering tag");
  }
  header.u16();
  const NodeId n = header.u32();
  const std::uint32_t kappa = header.u32();
  const std::uint64_t m = header.u64();
  const double c = header.f64();
  const double drop_tol = header.f64();
  const std::uint64_t nnz_l = header.u64();
  const std::uint64_t nnz_u = header.u64();
  const std::uint32_t sections = header.u32();
  const std::uint32_t crc = header.u32();

  const std::string_view payload = std::string_view(data).substr(kHeaderSize);
  if (crc32_of(payload) != crc) throw FormatError("checksum mismatch; index is corrupt");
  if (n > kMaxNodes) throw FormatError("node count exceeds 2^31 - 1");
  if (sections != kSectionCount) throw FormatError("unexpected section count");

  std::vector<NodeId> order;
  NormalizedMatrix matrix;
  std::vector<double> self_loops;
  InverseFactor lower, upper;
  std::vector<std::string> labels;
  std::uint32_t seen = 0;

  ByteReader r(payload);
  for (std::uint32_t s = 0; s < sections; ++s) {
    const auto tag = r.u32();
    const auto len = r.u64();
    if (tag < 1 || tag > kSectionCount) throw FormatError("unknown section tag");
    if (seen & (1u << tag)) throw FormatError("duplicate section");
    seen |= 1u << tag;
    ByteReader body(r.bytes(len));
    switch (tag) {
      case kOrderSection:
        order.resize(n);
        for (auto& v : order) v = body.u32();
        break;
      case kMaxSection:
        matrix.global_max = body.f64();
        matrix.col_max.resize(n);
        for (auto& v : matrix.col_max) v = body.f64();
        break;
      case kSelfLoopSection:
        self_loops.resize(n);
        for (auto& v : self_loops) v = body.f64();
        break;
      case kMatrixSection:
        matrix.columns = read_compressed(body, n);
        break;
      case kLowerInverseSection:
        lower.kind = TriangleKind::kLower;
        lower.storage = read_compressed(body, n);
        check_triangular(lower.storage, "lower inverse");
        break;
      case kUpperInverseSection:
        upper.kind = TriangleKind::kUpper;
        upper.storage = read_compressed(body, n);
        check_triangular(upper.storage, "upper inverse");
        break;
      case kLabelSection:
        labels.reserve(n);
        for (NodeId u = 0; u < n; ++u) labels.emplace_back(body.bytes(body.u32()));
        break;
    }
    if (body.remaining() != 0) throw FormatError("section length disagrees with its contents");
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last section");
  if (seen != ((1u << (kSectionCount + 1)) - 2)) throw FormatError("missing index section");
  if (lower.nnz() != nnz_l || upper.nnz() != nnz_u) {
    throw FormatError("header nnz counts disagree with stored factors");
  }

  Ordering ordering;
  try {
    ordering = Ordering::from_order(std::move(order));
  } catch (const ValidationError&) {
    throw FormatError("stored ordering is not a permutation");
  }
  auto idx = assemble_index(c, static_cast<OrderingStrategy>(strategy_tag), drop_tol, kappa, m,
                            std::move(ordering), std::move(matrix), std::move(lower),
                            std::move(upper), std::move(labels));
  if (!std::equal(self_loops.begin(), self_loops.end(), idx.self_loops().begin(),
                  idx.self_loops().end())) {
    throw FormatError("self-loop section disagrees with the transition matrix");
  }
  return idx;
}

ProximityIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index " + path.string());
  return load_index(in);
}

}  // namespace rwr
