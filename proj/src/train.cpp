#include "kgperf/train.hpp"

#include <algorithm>
#include <mutex>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/parallel.hpp"

namespace kgperf {

void TrainConfig::validate() const {
  if (k < 1) throw ConfigError("k must be positive");
  if (learning_rate <= 0) throw ConfigError("learning rate must be positive");
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (patience < 1) throw ConfigError("patience must be positive");
  if (negatives_per_positive < 1) throw ConfigError("eta must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  if (l2 < 0) throw ConfigError("l2 must be nonnegative");
}

RelationId majority_performance_class(std::span<const Triple> triples,
                                      RelationId solved, RelationId not_solved) {
  long ns = 0, nn = 0;
  for (const auto& t : triples) {
    if (t.rel == solved) ++ns;
    else if (t.rel == not_solved) ++nn;
  }
  return ns > nn ? solved : not_solved;
}

double validation_f1(const ComplExModel& model, std::span<const Triple> val,
                     RelationId solved, RelationId not_solved,
                     RelationId positive) {
  long tp = 0, fp = 0, fn = 0;
  for (const auto& t : val) {
    double ss = model.score({t.head, solved, t.tail});
    double sn = model.score({t.head, not_solved, t.tail});
    RelationId pred = ss > sn ? solved : not_solved;
    bool actual_pos = t.rel == positive;
    bool pred_pos = pred == positive;
    if (pred_pos && actual_pos) ++tp;
    else if (pred_pos) ++fp;
    else if (actual_pos) ++fn;
  }
  long den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

TrainResult train(const TrainTask& task, const TrainConfig& config) {
  config.validate();
  if (task.train_triples.empty()) throw DataError("empty training KG");
  if (task.val_triples.empty()) throw DataError("empty validation set");

  TrainResult out;
  out.model = init_model(config.k, config.loss, task.entity_labels,
                         task.relation_labels, config.seed);
  ComplExModel& model = out.model;

  TripleSet membership(task.train_triples.begin(), task.train_triples.end());
  const RelationId positive = majority_performance_class(
      task.train_triples, task.solved, task.not_solved);

  AdamState ent_opt(model.ent.size(), config.learning_rate);
  AdamState rel_opt(model.rel.size(), config.learning_rate);
  GradientBuffer grad(model.num_entities(), model.num_relations(), config.k);
  LossConfig loss_cfg{config.loss, config.margin, config.adv_alpha, config.l2};

  Rng rng(derive_seed(config.seed, fnv1a64("epochs")));
  std::vector<std::uint32_t> order(task.train_triples.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> best_ent, best_rel;
  int stall = 0;
  const std::size_t stride = 2 * static_cast<std::size_t>(config.k);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    std::vector<TrainExample> batch;
    batch.reserve(config.batch_size);

    for (std::size_t at = 0; at < order.size();) {
      batch.clear();
      std::size_t end =
          std::min(order.size(), at + static_cast<std::size_t>(config.batch_size));
      for (; at < end; ++at) {
        const Triple& pos = task.train_triples[order[at]];
        batch.push_back(
            {pos, sample_negatives(pos, membership,
                                   static_cast<std::uint32_t>(model.num_entities()),
                                   config.negatives_per_positive, rng)});
      }
      grad.reset();
      epoch_loss += loss_and_grad(model, loss_cfg, batch, grad);
      ent_opt.begin_step();
      rel_opt.begin_step();
      for (auto id : grad.touched_entities())
        ent_opt.apply(model.entity_row(id), grad.entity_grad(id), id * stride);
      for (auto id : grad.touched_relations())
        rel_opt.apply(model.relation_row(id), grad.relation_grad(id), id * stride);
    }

    double f1 = validation_f1(model, task.val_triples, task.solved,
                              task.not_solved, positive);
    TrainCheck check;
    check.check_index = epoch - 1;
    check.epoch = epoch;
    check.train_loss = epoch_loss / static_cast<double>(task.train_triples.size());
    check.val_f1 = f1;
    out.history.checks.push_back(check);

    if (out.history.checks.size() == 1 || f1 > out.history.best_val_f1) {
      out.history.best_val_f1 = f1;
      out.history.best_epoch = epoch;
      best_ent = model.ent;
      best_rel = model.rel;
      stall = 0;
    } else if (++stall >= config.patience) {
      out.history.stopped_early = true;
      break;
    }
  }

  model.ent = std::move(best_ent);
  model.rel = std::move(best_rel);
  return out;
}

void write_training_log(const std::string& path, const TrainHistory& history) {
  std::string out = "check_index,epoch,train_loss,val_f1\n";
  for (const auto& c : history.checks) {
    out += std::to_string(c.check_index);
    out += ',';
    out += std::to_string(c.epoch);
    out += ',';
    out += io::format_double(c.train_loss);
    out += ',';
    out += io::format_double(c.val_f1);
    out += '\n';
  }
  io::write_file(path, out);
}

std::vector<GridPoint> make_grid(const std::vector<int>& ks,
                                 const std::vector<double>& lrs,
                                 const std::vector<Loss>& losses) {
  if (ks.empty() || lrs.empty() || losses.empty())
    throw ConfigError("empty grid axis");
  std::vector<GridPoint> grid;
  grid.reserve(ks.size() * lrs.size() * losses.size());
  for (int k : ks)
    for (double lr : lrs)
      for (Loss loss : losses) grid.push_back({k, lr, loss});
  return grid;
}

GridOutcome grid_search(const TrainTask& task, const TrainConfig& base,
                        std::span<const GridPoint> grid, unsigned threads) {
  if (grid.empty()) throw ConfigError("empty grid");
  GridOutcome out;
  out.table.resize(grid.size());
  bool have_best = false;
  std::mutex best_mutex;

  parallel_for(grid.size(), threads, [&](std::size_t i) {
    TrainConfig cfg = base;
    cfg.k = grid[i].k;
    cfg.learning_rate = grid[i].learning_rate;
    cfg.loss = grid[i].loss;
    cfg.seed = derive_seed(base.seed, i);
    TrainResult result = train(task, cfg);
    out.table[i] = {grid[i], result.history.best_val_f1,
                    result.history.best_epoch};

    std::lock_guard<std::mutex> lock(best_mutex);
    bool better = !have_best ||
                  result.history.best_val_f1 > out.best.history.best_val_f1 ||
                  (result.history.best_val_f1 == out.best.history.best_val_f1 &&
                   i < out.best_index);
    if (better) {
      out.best = std::move(result);
      out.best_point = grid[i];
      out.best_index = i;
      have_best = true;
    }
  });
  return out;
}

void write_grid_csv(const std::string& path, const GridOutcome& outcome) {
  std::string out = "k,learning_rate,loss,val_f1,best_epoch\n";
  for (const auto& e : outcome.table) {
    out += std::to_string(e.point.k);
    out += ',';
    out += io::format_double(e.point.learning_rate);
    out += ',';
    out += std::string(to_string(e.point.loss));
    out += ',';
    out += io::format_double(e.val_f1);
    out += ',';
    out += std::to_string(e.best_epoch);
    out += '\n';
  }
  io::write_file(path, out);
}

}  // namespace kgperf
