#include "cxr/augment/batch.hpp"

#include <optional>

#include "cxr/augment/pgm.hpp"
#include "cxr/common/csv.hpp"
#include "cxr/common/io.hpp"

namespace cxr::augment {

std::uint64_t variant_seed(std::uint64_t plan_seed, std::size_t index, int variant) {
  return mix_seed(mix_seed(plan_seed, index), static_cast<std::uint64_t>(variant));
}

namespace {

struct Variant {
  std::string file_name;
  AugmentOp op;
  std::uint64_t seed = 0;
};

struct EntryOutcome {
  std::vector<Variant> variants;
  std::optional<std::string> error;
};

std::string padded_index(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

}  // namespace

BatchResult augment_batch(const std::filesystem::path& manifest_in,
                          const std::filesystem::path& out_dir, const AugmentPlan& plan) {
  if (plan.variants_per_image < 0) throw std::invalid_argument("variants_per_image < 0");
  const auto table = parse_csv(read_text_file(manifest_in));
  const auto path_col = table.require_column("path");
  const auto label_col = table.require_column("label");
  const auto base = manifest_in.parent_path();
  std::filesystem::create_directories(out_dir);

  const auto n = static_cast<std::ptrdiff_t>(table.rows.size());
  std::vector<EntryOutcome> outcomes(table.rows.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto& row = table.rows[i];
    auto& outcome = outcomes[i];
    try {
      const std::filesystem::path src = row[path_col];
      const auto image = decode_image(read_file(src.is_absolute() ? src : base / src));
      const std::string stem = padded_index(i) + "_" + src.stem().string();
      for (int v = 0; v < plan.variants_per_image; ++v) {
        Variant var;
        var.seed = variant_seed(plan.seed, i, v);
        XorShift64Star rng(var.seed);
        var.op = sample_op(rng, plan.ranges);
        var.file_name = stem + "_v" + std::to_string(v) + ".pgm";
        write_file_atomic(out_dir / var.file_name, write_pgm(apply(var.op, image)));
        outcome.variants.push_back(std::move(var));
      }
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
  }

  BatchResult result;
  std::string manifest = std::string(kOutputManifestHeader) + "\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& row = table.rows[i];
    if (outcomes[i].error) {
      result.errors.push_back({i, row[path_col], *outcomes[i].error});
      continue;
    }
    for (const auto& v : outcomes[i].variants) {
      manifest += csv_join({v.file_name, row[label_col], row[path_col],
                            std::string(augment_kind_name(v.op.kind)), v.op.params(),
                            std::to_string(v.seed)}) +
                  "\n";
      ++result.written;
    }
  }
  write_file_atomic(out_dir / kOutputManifestName, manifest);
  return result;
}

}  // namespace cxr::augment
