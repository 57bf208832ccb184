// SPDX-License-Identifier: Apache-2.0
#include "rfss/sample_metadata.hpp"

#include <json.hpp>

namespace rfss {

using nlohmann::json;

namespace {

json impairment_to_json(const ImpairmentDraw& d) {
    return json{{"cfo_hz", d.cfo_hz},
                {"iq_amp_db", d.iq_amp_db},
                {"iq_phase_deg", d.iq_phase_deg},
                {"pn_dbc_hz_at_10khz", d.pn_dbc_hz_at_10khz},
                {"dc_offset_dbc", d.dc_offset_dbc},
                {"pa_ibo_db", d.pa_ibo_db},
                {"rapp_p", d.rapp_p}};
}

ImpairmentDraw impairment_from_json(const json& j) {
    ImpairmentDraw d;
    d.cfo_hz = j.at("cfo_hz").get<double>();
    d.iq_amp_db = j.at("iq_amp_db").get<double>();
    d.iq_phase_deg = j.at("iq_phase_deg").get<double>();
    d.pn_dbc_hz_at_10khz = j.at("pn_dbc_hz_at_10khz").get<double>();
    d.dc_offset_dbc = j.at("dc_offset_dbc").get<double>();
    d.pa_ibo_db = j.at("pa_ibo_db").get<double>();
    d.rapp_p = j.at("rapp_p").get<double>();
    return d;
}

}  // namespace

bool operator==(const ImpairmentDraw& a, const ImpairmentDraw& b) {
    return a.cfo_hz == b.cfo_hz && a.iq_amp_db == b.iq_amp_db &&
           a.iq_phase_deg == b.iq_phase_deg &&
           a.pn_dbc_hz_at_10khz == b.pn_dbc_hz_at_10khz &&
           a.dc_offset_dbc == b.dc_offset_dbc && a.pa_ibo_db == b.pa_ibo_db &&
           a.rapp_p == b.rapp_p;
}

std::string SampleMetadata::to_json() const {
    json j;
    j["num_sources"] = num_sources;
    j["standards"] = standards;
    j["mixing_mode"] = mixing_mode;
    j["snr_db"] = snr_db;
    j["channel_types"] = channel_types;
    json imps = json::array();
    for (const auto& d : impairments) imps.push_back(impairment_to_json(d));
    j["impairments"] = std::move(imps);
    j["powers_db"] = powers_db;
    j["freq_offsets_hz"] = freq_offsets_hz;
    j["timing_offsets"] = timing_offsets;
    j["master_seed"] = master_seed;
    j["sample_index"] = sample_index;
    return j.dump();
}

SampleMetadata SampleMetadata::from_json(const std::string& text) {
    const json j = json::parse(text);
    SampleMetadata m;
    m.num_sources = j.at("num_sources").get<int>();
    m.standards = j.at("standards").get<std::vector<std::string>>();
    m.mixing_mode = j.at("mixing_mode").get<std::string>();
    m.snr_db = j.at("snr_db").get<std::vector<double>>();
    m.channel_types = j.at("channel_types").get<std::vector<std::string>>();
    for (const auto& e : j.at("impairments"))
        m.impairments.push_back(impairment_from_json(e));
    m.powers_db = j.at("powers_db").get<std::vector<double>>();
    m.freq_offsets_hz = j.at("freq_offsets_hz").get<std::vector<double>>();
    m.timing_offsets = j.at("timing_offsets").get<std::vector<int>>();
    m.master_seed = j.at("master_seed").get<uint64_t>();
    m.sample_index = j.at("sample_index").get<uint64_t>();
    return m;
}

}  // namespace rfss
