#include "desync/buffers.hpp"

#include <algorithm>
#include <set>

namespace desync {

ChannelId hat_channel(ChannelId c) {
  if (Signature::is_hatted(c)) throw Error("cannot hat an already hatted channel");
  return c | 1u;
}

ChannelId unhat_channel(ChannelId c) { return Signature::base_of(c); }

namespace {

Term rename_direction(const RecursiveSpec& spec, const Term& root, const ChannelFunction& f, Direction which) {
  ChannelMap map;
  for (const auto& [ch, dir] : channel_direction(spec, root))
    if (dir == which) map.emplace_back(ch, f(ch));
  if (map.empty()) return root;
  return Term::rename(std::move(map), root);
}

}  // namespace

Term rename_input_channels(const RecursiveSpec& spec, const Term& root, const ChannelFunction& f) {
  return rename_direction(spec, root, f, Direction::input);
}

Term rename_output_channels(const RecursiveSpec& spec, const Term& root, const ChannelFunction& f) {
  return rename_direction(spec, root, f, Direction::output);
}

Term make_buffer(const Signature& sig, ChannelId input, BufferKind kind, std::vector<DatumId> data) {
  if (Signature::is_hatted(input)) throw Error("buffer input channel '" + sig.channel_name(input) + "' is hatted");
  if (kind.capacity && *kind.capacity == 0) throw Error("buffer capacity must be at least 1");
  if (data.empty()) {
    auto declared = sig.channel_data(input);
    data.assign(declared.begin(), declared.end());
  }
  std::sort(data.begin(), data.end());
  data.erase(std::unique(data.begin(), data.end()), data.end());
  if (kind.discipline == BufferDiscipline::wire) kind.capacity = 1;
  return make_term({BufferProc{kind, input, std::move(data), {}}});
}

Term buffer_bank(const Signature& sig, std::span<const ChannelId> channels, BufferKind kind) {
  std::set<ChannelId> seen;
  std::vector<Term> parts;
  for (ChannelId c : channels) {
    if (!seen.insert(c).second) throw Error("duplicate channel in buffer bank");
    parts.push_back(make_buffer(sig, c, kind));
  }
  return Term::par(std::move(parts));
}

}  // namespace desync
