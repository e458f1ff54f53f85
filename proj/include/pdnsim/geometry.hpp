#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pdnsim {

enum class Design { clustered, distributed };
enum class Polarity { P, G };

std::string design_name(Design d);
Design design_from_name(const std::string& name);

struct StackConfig {
  int dram_layers = 4;
  int logic_layers = 1;
  int vaults = 4;
  int banks_per_partition = 2;
  int subarrays_per_bank = 32;
  int tiles_per_subarray = 16;
  double tile_width_um = 29.0;
  double tile_height_um = 41.3;
  int rows_per_bank = 16384;
  int row_width_bits = 8192;
};

struct PdnParams {
  double tsv_diameter_um = 10.0;
  double tsv_pitch_um = 21.0;
  double rail_width_um = 2.0;
  double vertical_rail_pitch_um = 7.0;
  int vertical_rails = 96;
  int horizontal_rails = 128;
  double sheet_resistance_ohm_sq = 0.9;
  double tsv_c4_resistance_ohm = 0.25;
  // When set, tsv_c4_resistance_ohm is a per-tier segment value instead of
  // the lumped full-chain value.
  bool tsv_c4_per_tier = false;
  double supply_voltage_v = 1.5;
  double ir_margin_mv = 75.0;
  double current_per_saa_ma = 100.0;
  // Clustered: TSV sites per bank edge. Distributed: sites per internal
  // section-boundary line (the two outer boundary lines hold half as many).
  int tsvs_per_line = 32;
};

struct TsvSite {
  double x_um;
  double y_um;
  Polarity polarity;
};

struct Section {
  double y_min_um;
  double y_max_um;
  std::vector<int> subarray_ids;
};

struct PdnLayout {
  Design design = Design::clustered;
  double bank_width_um = 0.0;
  double bank_height_um = 0.0;
  std::vector<TsvSite> tsv_sites;
  std::vector<Section> sections;
  // Indexed by subarray id - 1 (ids run 1..subarrays_per_bank).
  std::vector<std::pair<double, double>> subarray_centers;
};

void validate_params(const PdnParams& params, const StackConfig& stack);

PdnLayout build_clustered_layout(const PdnParams& params, const StackConfig& stack);
PdnLayout build_distributed_layout(const PdnParams& params, const StackConfig& stack);
PdnLayout build_layout(Design design, const PdnParams& params, const StackConfig& stack);

std::pair<double, double> subarray_center(const PdnLayout& layout, int subarray_id);

// CSV export, one row per TSV site: x_um,y_um,polarity.
std::string layout_csv(const PdnLayout& layout);

}  // namespace pdnsim
