#include <algorithm>
#include <cmath>

#include "dsssp/approx_sssp.hpp"
#include "dsssp/virtual_sssp.hpp"

namespace dsssp {

namespace {

VirtualResult recurse(VirtualBus& bus, const VirtualGraph& g, double eps, int depth, int limit,
                      const RecursiveOptions& options, std::uint64_t seed) {
  if (depth > limit) throw RecursionDepthExceeded("virtual recursion deeper than " + std::to_string(limit));
  if (eps >= 0.5 - 1e-12) {
    NonrecursiveOptions no;
    no.seed = seed;
    no.c_h = options.c_h;
    return virtual_sssp_nonrecursive(bus, g, no);
  }
  const std::size_t nv = g.size();
  const Dist r = std::max<Dist>(1, g.radius);
  const double d_hat = static_cast<double>(bus.diameter_estimate());
  const double eps1 = std::min(0.5, eps / (1 - 2 * eps));
  const double delta = std::clamp(eps * (1 + 2 * eps1) / eps1 - 1, 0.0, 2 * eps1 * (1 - 1e-9));
  const Dist ell = std::clamp<Dist>(
      ceil_param(std::pow(static_cast<double>(r), (1 + delta) / (1 + 2 * eps1))), 1, r);
  const double k = static_cast<double>(
      ceil_param(std::sqrt(static_cast<double>(r) / static_cast<double>(ell)) * std::sqrt(d_hat)));

  VirtualResult res;
  std::vector<std::size_t> posts_by(nv, 0);
  std::size_t child_max = 0;
  std::size_t vr0 = bus.virtual_rounds();
  Round nr0 = bus.metrics().rounds;

  auto approx = virtual_additive_sssp(bus, g, ell, r, k, mix_seed(seed, 1), options.c_h);
  VirtualAdjacency adj(g);
  auto& d = res.dist;
  d.assign(nv, kInfinity);
  d[g.source] = 0;
  auto announce = [&](const std::vector<std::uint32_t>& who) {
    std::vector<VirtualBus::Post> posts;
    for (auto v : who)
      if (is_finite(d[v])) {
        posts.push_back({g.host[v], Message::two(v, encode_dist(d[v], bus.word_cap()))});
        ++posts_by[v];
      }
    for (const Message& m : bus.exchange(posts)) {
      auto u = static_cast<std::uint32_t>(m[0]);
      Dist du = decode_dist(m[1], bus.word_cap());
      for (std::size_t e = adj.offsets[u]; e < adj.offsets[u + 1]; ++e) {
        auto [x, w] = adj.out[e];
        d[x] = std::min(d[x], add_dist(du, w));
      }
    }
  };
  announce({g.source});

  std::vector<std::uint32_t> index(nv, UINT32_MAX);
  for (Dist i = 0; i <= r / ell; ++i) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t v = 0; v < nv; ++v)
      if (v != g.source && is_finite(approx[v]) && approx[v] >= i * ell && approx[v] < (i + 2) * ell)
        members.push_back(v);
    if (members.empty()) continue;
    const Dist offset = std::max<Dist>(0, (i - 1) * ell);
    VirtualGraph b;
    b.host.push_back(g.host[g.source]);
    b.source = 0;
    for (std::uint32_t j = 0; j < members.size(); ++j) {
      index[members[j]] = j + 1;
      b.host.push_back(g.host[members[j]]);
      if (is_finite(d[members[j]])) b.edges.push_back({0, j + 1, std::max<Dist>(0, d[members[j]] - offset)});
    }
    for (const auto& e : g.edges)
      if (e.tail != g.source && index[e.tail] != UINT32_MAX && index[e.head] != UINT32_MAX)
        b.edges.push_back({index[e.tail], index[e.head], e.w});
    b.radius = 2 * ell;
    VirtualResult child = recurse(bus, b, eps1, depth + 1, limit, options, mix_seed(seed, 100 + i));
    child_max = std::max(child_max, child.broadcasts);
    for (std::uint32_t j = 0; j < members.size(); ++j) {
      d[members[j]] = std::min(d[members[j]], add_dist(child.dist[j + 1], offset));
      index[members[j]] = UINT32_MAX;
    }
    announce(members);
  }

  std::size_t own = 0;
  for (auto c : posts_by) own = std::max(own, c);
  res.broadcasts = own + 2 * child_max;
  res.virtual_rounds = bus.virtual_rounds() - vr0;
  res.network_rounds = bus.metrics().rounds - nr0;
  return res;
}

}  // namespace

VirtualResult virtual_sssp_recursive(VirtualBus& bus, const VirtualGraph& g, double eps,
                                     const RecursiveOptions& options) {
  g.validate();
  if (!(eps > 0) || eps > 0.5) throw ParamError("recursive virtual SSSP needs eps in (0, 1/2]");
  int limit = options.depth_limit > 0 ? options.depth_limit : static_cast<int>(std::ceil(1 / (2 * eps) - 1e-9));
  return recurse(bus, g, eps, 0, limit, options, options.seed);
}

std::string to_string(VariantKind k) {
  switch (k) {
    case VariantKind::queue: return "queue";
    case VariantKind::gather: return "gather";
    case VariantKind::nonrecursive: return "nonrecursive";
    case VariantKind::recursive: return "recursive";
  }
  return "?";
}

VariantKind variant_from_string(const std::string& s) {
  for (auto k : {VariantKind::queue, VariantKind::gather, VariantKind::nonrecursive, VariantKind::recursive})
    if (to_string(k) == s) return k;
  throw ParamError("unknown virtual variant '" + s + "'");
}

VirtualVariant select_virtual_variant(std::size_t n, std::size_t n_virtual, std::size_t d_hat, std::size_t kappa) {
  n = std::max<std::size_t>(n, 2);
  n_virtual = std::max<std::size_t>(n_virtual, 1);
  d_hat = std::max<std::size_t>(d_hat, 1);
  kappa = std::max<std::size_t>(kappa, 1);
  const double N = static_cast<double>(n), V = static_cast<double>(n_virtual);
  const double D = static_cast<double>(d_hat), K = static_cast<double>(kappa);
  VirtualVariant out;
  if (d_hat <= static_cast<std::size_t>(2 * ceil_log2(n))) return out;
  out.kind = VariantKind::gather;
  if (kappa >= d_hat || D > std::pow(K, 0.4) * std::pow(N, 0.9)) return out;
  if (K * V * V + D <= std::cbrt(K) * V * std::pow(D, 2.0 / 3.0)) return out;
  double k = std::pow(N, 0.75) / std::sqrt(D);
  if (k <= 1) return out;
  out.kind = VariantKind::recursive;
  double eps = std::log(std::sqrt(D / K)) / (3 * std::log(k));
  out.eps = std::clamp(eps, 1e-3, 0.5);
  // Snap near-rational values so that, e.g., 1/6 stays exactly 1/6.
  for (int den = 2; den <= 64; ++den) {
    double num = std::round(out.eps * den);
    if (num >= 1 && std::abs(out.eps - num / den) < 1e-9) {
      out.eps = num / den;
      break;
    }
  }
  return out;
}

VirtualResult solve_virtual(VirtualBus& bus, const VirtualGraph& g, const VirtualVariant& variant, std::uint64_t seed) {
  switch (variant.kind) {
    case VariantKind::queue:
      return virtual_sssp(bus, g);
    case VariantKind::gather:
      return virtual_sssp_gather(bus, g);
    case VariantKind::nonrecursive: {
      std::uint64_t round = 0;
      return virtual_scaled(bus, g, [&](const VirtualGraph& x) {
        NonrecursiveOptions o;
        o.seed = mix_seed(seed, ++round);
        return virtual_sssp_nonrecursive(bus, x, o);
      });
    }
    case VariantKind::recursive: {
      std::uint64_t round = 0;
      return virtual_scaled(bus, g, [&](const VirtualGraph& x) {
        RecursiveOptions o;
        o.seed = mix_seed(seed, ++round);
        return virtual_sssp_recursive(bus, x, variant.eps, o);
      });
    }
  }
  throw ParamError("unknown virtual variant");
}

}  // namespace dsssp
