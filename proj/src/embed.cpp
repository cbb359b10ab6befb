#include "kgperf/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"

namespace kgperf {
namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 30) return x;
  if (x < -30) return std::exp(x);
  return std::log1p(std::exp(x));
}

/// Adds coeff * ds/dparam for every parameter the triple's score touches.
void add_score_grad(const ComplExModel& model, const Triple& t, double coeff,
                    GradientBuffer& grad) {
  const int k = model.k;
  auto h = model.entity_row(t.head);
  auto r = model.relation_row(t.rel);
  auto tl = model.entity_row(t.tail);
  auto gh = grad.entity_grad(t.head);
  auto gr = grad.relation_grad(t.rel);
  auto gt = grad.entity_grad(t.tail);
  for (int j = 0; j < k; ++j) {
    double hr = h[j], hi = h[k + j];
    double rr = r[j], ri = r[k + j];
    double tr = tl[j], ti = tl[k + j];
    gh[j] += coeff * (rr * tr + ri * ti);
    gh[k + j] += coeff * (rr * ti - ri * tr);
    gr[j] += coeff * (hr * tr + hi * ti);
    gr[k + j] += coeff * (hr * ti - hi * tr);
    gt[j] += coeff * (hr * rr - hi * ri);
    gt[k + j] += coeff * (hr * ri + hi * rr);
  }
}

}  // namespace

Loss parse_loss(std::string_view s) {
  if (s == "pairwise") return Loss::pairwise;
  if (s == "nll") return Loss::nll;
  if (s == "self_adversarial") return Loss::self_adversarial;
  throw ConfigError("unknown loss: " + std::string(s));
}

std::string_view to_string(Loss loss) {
  switch (loss) {
    case Loss::pairwise: return "pairwise";
    case Loss::nll: return "nll";
    default: return "self_adversarial";
  }
}

double ComplExModel::score(const Triple& t) const {
  auto h = entity_row(t.head);
  auto r = relation_row(t.rel);
  auto tl = entity_row(t.tail);
  double s = 0;
  for (int j = 0; j < k; ++j) {
    double hr = h[j], hi = h[k + j];
    double rr = r[j], ri = r[k + j];
    double tr = tl[j], ti = tl[k + j];
    s += hr * rr * tr + hi * rr * ti + hr * ri * ti - hi * ri * tr;
  }
  return s;
}

ComplExModel init_model(int k, Loss loss, std::vector<std::string> entity_labels,
                        std::vector<std::string> relation_labels,
                        std::uint64_t seed) {
  if (k < 1) throw ConfigError("embedding dimension must be positive");
  if (entity_labels.empty() || relation_labels.empty())
    throw DataError("model needs at least one entity and one relation");
  ComplExModel m;
  m.k = k;
  m.loss = loss;
  m.seed = seed;
  m.entity_labels = std::move(entity_labels);
  m.relation_labels = std::move(relation_labels);
  m.ent.resize(m.entity_labels.size() * 2 * k);
  m.rel.resize(m.relation_labels.size() * 2 * k);
  double bound = std::sqrt(6.0 / (2.0 * k));
  Rng rng(seed);
  for (double& v : m.ent) v = rng.uniform(-bound, bound);
  for (double& v : m.rel) v = rng.uniform(-bound, bound);
  return m;
}

void save_model(const std::string& path, const ComplExModel& model) {
  std::string out = "complex-v1\t" + std::to_string(model.k) + "\t" +
                    std::to_string(model.num_entities()) + "\t" +
                    std::to_string(model.num_relations()) + "\t" +
                    std::string(to_string(model.loss)) + "\t" +
                    std::to_string(model.seed) + "\n";
  auto emit = [&](char tag, const std::string& label, std::span<const double> row) {
    out += tag;
    out += '\t';
    out += label;
    for (double v : row) {
      out += '\t';
      out += io::format_double(v);
    }
    out += '\n';
  };
  for (std::uint32_t i = 0; i < model.num_entities(); ++i)
    emit('E', model.entity_labels[i], model.entity_row(i));
  for (std::uint32_t i = 0; i < model.num_relations(); ++i)
    emit('R', model.relation_labels[i], model.relation_row(i));
  io::write_file(path, out);
}

ComplExModel load_model(const std::string& path) {
  const std::string text = io::read_file(path);
  auto lines = io::split_lines(text);
  if (lines.empty()) throw DataError(path + ": empty model file");
  auto header = io::split(lines[0], '\t');
  if (header.size() != 6 || header[0] != "complex-v1")
    throw DataError(path + ": bad model header");
  ComplExModel m;
  m.k = static_cast<int>(io::parse_long(header[1], path + " header k"));
  std::size_t ne =
      static_cast<std::size_t>(io::parse_long(header[2], path + " header |E|"));
  std::size_t nr =
      static_cast<std::size_t>(io::parse_long(header[3], path + " header |R|"));
  m.loss = parse_loss(header[4]);
  m.seed = io::parse_ulong(header[5], path + " header seed");
  if (m.k < 1) throw DataError(path + ": bad embedding dimension");
  if (lines.size() != 1 + ne + nr)
    throw DataError(path + ": row count does not match header");

  m.ent.reserve(ne * 2 * m.k);
  m.rel.reserve(nr * 2 * m.k);
  std::unordered_set<std::string> seen;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    std::string where = path + " line " + std::to_string(ln + 1);
    auto fields = io::split(lines[ln], '\t');
    if (fields.size() != 2 + 2 * static_cast<std::size_t>(m.k))
      throw DataError(where + ": expected " + std::to_string(2 + 2 * m.k) +
                      " fields");
    bool is_entity = fields[0] == "E";
    if (!is_entity && fields[0] != "R")
      throw DataError(where + ": bad row tag");
    if (fields[1].empty()) throw DataError(where + ": empty label");
    if (!seen.emplace(std::string(fields[0]) + "\t" + std::string(fields[1]))
             .second)
      throw DataError(where + ": duplicate label");
    auto& labels = is_entity ? m.entity_labels : m.relation_labels;
    auto& table = is_entity ? m.ent : m.rel;
    labels.emplace_back(fields[1]);
    for (std::size_t f = 2; f < fields.size(); ++f)
      table.push_back(io::parse_double(fields[f], where));
  }
  if (m.entity_labels.size() != ne || m.relation_labels.size() != nr)
    throw DataError(path + ": entity/relation counts do not match header");
  return m;
}

void AdamState::begin_step() {
  ++step_;
  corr1_ = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
  corr2_ = 1.0 - std::pow(kBeta2, static_cast<double>(step_));
}

void AdamState::apply(std::span<double> params, std::span<const double> grad,
                      std::size_t offset) {
  for (std::size_t j = 0; j < grad.size(); ++j) {
    double g = grad[j];
    double& m = m_[offset + j];
    double& v = v_[offset + j];
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g * g;
    params[j] -= lr_ * (m / corr1_) / (std::sqrt(v / corr2_) + kEps);
  }
}

GradientBuffer::GradientBuffer(std::size_t entities, std::size_t relations, int k)
    : k_(k),
      ent_(entities * 2 * k, 0.0),
      rel_(relations * 2 * k, 0.0),
      ent_touched_(entities, 0),
      rel_touched_(relations, 0) {}

void GradientBuffer::reset() {
  for (auto id : ent_rows_) {
    std::fill_n(ent_.begin() + static_cast<std::size_t>(id) * 2 * k_, 2 * k_, 0.0);
    ent_touched_[id] = 0;
  }
  for (auto id : rel_rows_) {
    std::fill_n(rel_.begin() + static_cast<std::size_t>(id) * 2 * k_, 2 * k_, 0.0);
    rel_touched_[id] = 0;
  }
  ent_rows_.clear();
  rel_rows_.clear();
}

std::span<double> GradientBuffer::entity_grad(std::uint32_t id) {
  if (!ent_touched_[id]) {
    ent_touched_[id] = 1;
    ent_rows_.push_back(id);
  }
  return {ent_.data() + static_cast<std::size_t>(id) * 2 * k_,
          static_cast<std::size_t>(2 * k_)};
}

std::span<double> GradientBuffer::relation_grad(std::uint32_t id) {
  if (!rel_touched_[id]) {
    rel_touched_[id] = 1;
    rel_rows_.push_back(id);
  }
  return {rel_.data() + static_cast<std::size_t>(id) * 2 * k_,
          static_cast<std::size_t>(2 * k_)};
}

std::vector<Triple> sample_negatives(const Triple& pos, const TripleSet& known,
                                     std::uint32_t num_entities, int eta,
                                     Rng& rng) {
  if (num_entities < 2)
    throw DataError("negative sampling needs at least 2 entities");
  if (eta < 1) throw ConfigError("eta must be at least 1");
  std::vector<Triple> out;
  out.reserve(eta);
  for (int e = 0; e < eta; ++e) {
    Triple cand = pos;
    for (int attempt = 0; attempt < 100; ++attempt) {
      cand = pos;
      bool corrupt_head = rng.coin();
      std::uint32_t orig = corrupt_head ? pos.head : pos.tail;
      std::uint32_t idx =
          static_cast<std::uint32_t>(rng.uniform_index(num_entities - 1));
      if (idx >= orig) ++idx;
      (corrupt_head ? cand.head : cand.tail) = idx;
      if (!known.contains(cand)) break;
    }
    out.push_back(cand);
  }
  return out;
}

double loss_and_grad(const ComplExModel& model, const LossConfig& config,
                     std::span<const TrainExample> batch, GradientBuffer& grad) {
  double total = 0;
  std::vector<double> sneg, w, g;

  for (const auto& ex : batch) {
    double spos = model.score(ex.pos);
    switch (config.loss) {
      case Loss::pairwise: {
        for (const auto& neg : ex.negs) {
          double sn = model.score(neg);
          double violation = config.margin + sn - spos;
          if (violation > 0) {
            total += violation;
            add_score_grad(model, ex.pos, -1.0, grad);
            add_score_grad(model, neg, 1.0, grad);
          }
        }
        break;
      }
      case Loss::nll: {
        total += softplus(-spos);
        add_score_grad(model, ex.pos, -sigmoid(-spos), grad);
        for (const auto& neg : ex.negs) {
          double sn = model.score(neg);
          total += softplus(sn);
          add_score_grad(model, neg, sigmoid(sn), grad);
        }
        break;
      }
      case Loss::self_adversarial: {
        // Weights are softmax(alpha * s) over the example's negatives and are
        // part of the computation graph, so their score dependence appears in
        // the gradient too.
        std::size_t n = ex.negs.size();
        sneg.resize(n);
        w.resize(n);
        g.resize(n);
        double smax = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
          sneg[i] = model.score(ex.negs[i]);
          smax = std::max(smax, config.adv_alpha * sneg[i]);
        }
        double z = 0;
        for (std::size_t i = 0; i < n; ++i) {
          w[i] = std::exp(config.adv_alpha * sneg[i] - smax);
          z += w[i];
        }
        double lneg = 0;
        for (std::size_t i = 0; i < n; ++i) {
          w[i] /= z;
          g[i] = softplus(sneg[i] - config.margin);
          lneg += w[i] * g[i];
        }
        total += softplus(config.margin - spos) + lneg;
        add_score_grad(model, ex.pos, -sigmoid(config.margin - spos), grad);
        for (std::size_t i = 0; i < n; ++i) {
          double coeff = w[i] * sigmoid(sneg[i] - config.margin) +
                         config.adv_alpha * w[i] * (g[i] - lneg);
          add_score_grad(model, ex.negs[i], coeff, grad);
        }
        break;
      }
    }
  }

  if (config.l2 > 0) {
    // Register every row the batch references, then penalize each one once.
    for (const auto& ex : batch) {
      grad.entity_grad(ex.pos.head);
      grad.relation_grad(ex.pos.rel);
      grad.entity_grad(ex.pos.tail);
      for (const auto& neg : ex.negs) {
        grad.entity_grad(neg.head);
        grad.relation_grad(neg.rel);
        grad.entity_grad(neg.tail);
      }
    }
    for (auto id : grad.touched_entities()) {
      auto row = model.entity_row(id);
      auto gr = grad.entity_grad(id);
      for (std::size_t j = 0; j < row.size(); ++j) {
        total += config.l2 * row[j] * row[j];
        gr[j] += 2.0 * config.l2 * row[j];
      }
    }
    for (auto id : grad.touched_relations()) {
      auto row = model.relation_row(id);
      auto gr = grad.relation_grad(id);
      for (std::size_t j = 0; j < row.size(); ++j) {
        total += config.l2 * row[j] * row[j];
        gr[j] += 2.0 * config.l2 * row[j];
      }
    }
  }
  return total;
}

}  // namespace kgperf
