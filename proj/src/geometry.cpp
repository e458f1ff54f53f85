#include "pdnsim/geometry.hpp"

#include <cmath>

#include "pdnsim/error.hpp"
#include "pdnsim/textio.hpp"

namespace pdnsim {

namespace {

// Bank heights fixed by the floorplan: the distributed variant trades one
// extra section row (128 um taller) against a wider bank.
constexpr double kClusteredBankHeightUm = 928.0;
constexpr double kDistributedBankHeightUm = 1056.0;
constexpr int kDistributedSections = 8;

std::vector<std::pair<double, double>> subarray_column(double bank_width,
                                                       double bank_height,
                                                       int count) {
  std::vector<std::pair<double, double>> centers;
  centers.reserve(count);
  double pitch = bank_height / count;
  for (int i = 0; i < count; ++i) {
    centers.emplace_back(bank_width / 2.0, (i + 0.5) * pitch);
  }
  return centers;
}

}  // namespace

std::string design_name(Design d) {
  return d == Design::clustered ? "clustered" : "distributed";
}

Design design_from_name(const std::string& name) {
  if (name == "clustered") return Design::clustered;
  if (name == "distributed") return Design::distributed;
  fail("invalid-params", "unknown design '" + name + "'");
}

void validate_params(const PdnParams& params, const StackConfig& stack) {
  if (!(params.tsv_diameter_um > 0) || !(params.tsv_pitch_um > 0) ||
      !(params.rail_width_um > 0) || !(params.vertical_rail_pitch_um > 0) ||
      !(params.sheet_resistance_ohm_sq > 0) || !(params.tsv_c4_resistance_ohm > 0) ||
      !(params.supply_voltage_v > 0) || !(params.current_per_saa_ma > 0)) {
    fail("invalid-params", "lengths, resistances and currents must be > 0");
  }
  if (params.tsv_pitch_um < params.tsv_diameter_um) {
    fail("invalid-params", "tsv_pitch below tsv_diameter: sites would overlap");
  }
  if (!(params.ir_margin_mv > 0) ||
      params.ir_margin_mv >= params.supply_voltage_v * 1000.0) {
    fail("invalid-params", "ir_margin must lie in (0, supply_voltage)");
  }
  if (params.vertical_rails < 2 || params.horizontal_rails < 2) {
    fail("invalid-params", "need at least 2 rails per direction");
  }
  if (params.tsvs_per_line < 2 || params.tsvs_per_line % 2 != 0) {
    fail("invalid-params", "tsvs_per_line must be even and >= 2");
  }
  if (stack.dram_layers < 1 || stack.subarrays_per_bank < 1) {
    fail("invalid-params", "stack needs >= 1 DRAM layer and >= 1 subarray");
  }
}

PdnLayout build_clustered_layout(const PdnParams& params, const StackConfig& stack) {
  validate_params(params, stack);
  PdnLayout layout;
  layout.design = Design::clustered;
  layout.bank_width_um = params.tsvs_per_line * params.tsv_pitch_um;
  layout.bank_height_um = kClusteredBankHeightUm;

  // One TSV line along each horizontal bank edge, alternating P,G.
  for (double y : {0.0, layout.bank_height_um}) {
    for (int i = 0; i < params.tsvs_per_line; ++i) {
      TsvSite site;
      site.x_um = (i + 0.5) * params.tsv_pitch_um;
      site.y_um = y;
      site.polarity = (i % 2 == 0) ? Polarity::P : Polarity::G;
      layout.tsv_sites.push_back(site);
    }
  }

  layout.subarray_centers =
      subarray_column(layout.bank_width_um, layout.bank_height_um, stack.subarrays_per_bank);

  Section whole;
  whole.y_min_um = 0.0;
  whole.y_max_um = layout.bank_height_um;
  for (int id = 1; id <= stack.subarrays_per_bank; ++id) whole.subarray_ids.push_back(id);
  layout.sections.push_back(whole);
  return layout;
}

PdnLayout build_distributed_layout(const PdnParams& params, const StackConfig& stack) {
  validate_params(params, stack);
  PdnLayout layout;
  layout.design = Design::distributed;
  layout.bank_width_um = params.tsvs_per_line * params.tsv_pitch_um;
  layout.bank_height_um = kDistributedBankHeightUm;
  double section_h = layout.bank_height_um / kDistributedSections;

  // 9 horizontal TSV lines on the section boundaries. Internal lines carry a
  // full alternating row (P at even slots). The bottom bank edge carries only
  // the G half serving section 0; the top edge only the P half serving
  // section 7.
  for (int line = 0; line <= kDistributedSections; ++line) {
    double y = line * section_h;
    for (int j = 0; j < params.tsvs_per_line; ++j) {
      bool is_p = (j % 2 == 0);
      if (line == 0 && is_p) continue;
      if (line == kDistributedSections && !is_p) continue;
      TsvSite site;
      site.x_um = (j + 0.5) * params.tsv_pitch_um;
      site.y_um = y;
      site.polarity = is_p ? Polarity::P : Polarity::G;
      layout.tsv_sites.push_back(site);
    }
  }

  layout.subarray_centers =
      subarray_column(layout.bank_width_um, layout.bank_height_um, stack.subarrays_per_bank);

  for (int s = 0; s < kDistributedSections; ++s) {
    Section sec;
    sec.y_min_um = s * section_h;
    sec.y_max_um = (s + 1) * section_h;
    layout.sections.push_back(sec);
  }
  for (int id = 1; id <= stack.subarrays_per_bank; ++id) {
    double y = layout.subarray_centers[id - 1].second;
    int s = std::min(kDistributedSections - 1,
                     static_cast<int>(y / section_h));
    layout.sections[s].subarray_ids.push_back(id);
  }
  return layout;
}

PdnLayout build_layout(Design design, const PdnParams& params, const StackConfig& stack) {
  return design == Design::clustered ? build_clustered_layout(params, stack)
                                     : build_distributed_layout(params, stack);
}

std::pair<double, double> subarray_center(const PdnLayout& layout, int subarray_id) {
  if (subarray_id < 1 ||
      subarray_id > static_cast<int>(layout.subarray_centers.size())) {
    fail("invalid-params", textio::fmt("subarray id %d out of range", subarray_id));
  }
  return layout.subarray_centers[subarray_id - 1];
}

std::string layout_csv(const PdnLayout& layout) {
  std::string out = "x_um,y_um,polarity\n";
  for (const TsvSite& site : layout.tsv_sites) {
    out += textio::fmt("%.6g,%.6g,%s\n", site.x_um, site.y_um,
                       site.polarity == Polarity::P ? "P" : "G");
  }
  return out;
}

}  // namespace pdnsim
