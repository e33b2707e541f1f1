/*
 * Copyright (c) 2026, The RAMP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ramp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "ramp/text.hpp"

namespace ramp {

std::int64_t PortableRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return lo + static_cast<std::int64_t>(r % span);
}

double PortableRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------

std::string ClauseSpec::dsl() const {
    switch (kind) {
        case Kind::NumberCompare:
            return column + " " + std::string(dsl::to_string(op)) + " " + text::format_number(number);
        case Kind::DateWithin:
            return column + " within_last " + std::to_string(days) + " days";
        case Kind::DateCompare:
            return column + " " + std::string(dsl::to_string(op)) + " date \"" + date.to_string() + "\"";
        case Kind::BoolEquals:
            return column + " = " + (flag ? "true" : "false");
        case Kind::TextEquals:
            return column + " = \"" + text + "\"";
        case Kind::ListContains:
            return column + " contains \"" + text + "\"";
    }
    return {};
}

namespace {

template <class T>
bool ordered_holds(dsl::CompareOp op, const T& a, const T& b) {
    switch (op) {
        case dsl::CompareOp::Eq: return a == b;
        case dsl::CompareOp::Ne: return a != b;
        case dsl::CompareOp::Lt: return a < b;
        case dsl::CompareOp::Le: return a <= b;
        case dsl::CompareOp::Gt: return a > b;
        case dsl::CompareOp::Ge: return !(a < b);
    }
    return false;
}

}  // namespace

bool clause_holds(const ClauseSpec& c, const CustomerTable& table, std::size_t row, Date today) {
    const auto col = table.column_index(c.column);
    if (!col) throw Error("synthetic clause names unknown column " + c.column);
    const CellValue& v = table.cell(*col, row);
    switch (c.kind) {
        case ClauseSpec::Kind::NumberCompare: {
            const auto* d = std::get_if<double>(&v);
            return d && ordered_holds(c.op, *d, c.number);
        }
        case ClauseSpec::Kind::DateWithin: {
            const auto* d = std::get_if<Date>(&v);
            if (!d) return false;
            const auto age = today.days_since_epoch() - d->days_since_epoch();
            return age >= 0 && age <= c.days;
        }
        case ClauseSpec::Kind::DateCompare: {
            const auto* d = std::get_if<Date>(&v);
            return d && ordered_holds(c.op, d->days_since_epoch(), c.date.days_since_epoch());
        }
        case ClauseSpec::Kind::BoolEquals: {
            const auto* b = std::get_if<bool>(&v);
            return b && *b == c.flag;
        }
        case ClauseSpec::Kind::TextEquals: {
            const auto* s = std::get_if<std::string>(&v);
            return s && *s == c.text;
        }
        case ClauseSpec::Kind::ListContains: {
            const auto* l = std::get_if<TextList>(&v);
            if (!l) return false;
            const auto needle = text::to_lower(c.text);
            for (const auto& e : *l) {
                if (text::to_lower(e).find(needle) != std::string::npos) return true;
            }
            return false;
        }
    }
    return false;
}

std::vector<std::string> scan_ids(const CustomerTable& table, const std::vector<ClauseSpec>& clauses, Date today) {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        bool keep = true;
        for (const auto& c : clauses) {
            if (!clause_holds(c, table, r, today)) {
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(table.id(r));
    }
    return out;
}

void GenConfig::validate() const {
    if (rows < 500) throw ConfigError("synthetic rows must be at least 500");
    if (cases < 2) throw ConfigError("synthetic cases must be at least 2");
    if (rows > 1'000'000) throw ConfigError("synthetic rows must be at most 1000000");
}

// ---------------------------------------------------------------------------

namespace {

struct StateInfo {
    std::string code;
    std::string name;
    std::string region;
    std::vector<std::string> cities;
    int zip_prefix;
};

const std::vector<StateInfo>& states() {
    static const std::vector<StateInfo> kStates = {
        {"MA", "Massachusetts", "northeast", {"Boston", "Cambridge", "Worcester"}, 21},
        {"NY", "New York", "northeast", {"New York", "Buffalo", "Albany"}, 100},
        {"CA", "California", "west", {"Los Angeles", "San Francisco", "San Diego"}, 900},
        {"TX", "Texas", "south", {"Houston", "Austin", "Dallas"}, 750},
        {"FL", "Florida", "south", {"Miami", "Orlando", "Tampa"}, 330},
        {"WA", "Washington", "west", {"Seattle", "Spokane", "Tacoma"}, 980},
        {"IL", "Illinois", "midwest", {"Chicago", "Springfield", "Naperville"}, 606},
        {"GA", "Georgia", "south", {"Atlanta", "Savannah", "Augusta"}, 303},
        {"CO", "Colorado", "west", {"Denver", "Boulder", "Aurora"}, 802},
        {"AZ", "Arizona", "west", {"Phoenix", "Tucson", "Mesa"}, 850},
        {"NJ", "New Jersey", "northeast", {"Newark", "Jersey City", "Trenton"}, 71},
        {"PA", "Pennsylvania", "northeast", {"Philadelphia", "Pittsburgh", "Allentown"}, 191},
        {"OH", "Ohio", "midwest", {"Columbus", "Cleveland", "Cincinnati"}, 432},
        {"MI", "Michigan", "midwest", {"Detroit", "Grand Rapids", "Ann Arbor"}, 482},
        {"NC", "North Carolina", "south", {"Charlotte", "Raleigh", "Durham"}, 282},
    };
    return kStates;
}

const std::vector<std::string> kPages = {"Home",        "Hotels",    "Flights", "Financial Services",
                                         "Credit Cards", "Deals",     "Cruises", "Car Rentals",
                                         "Insurance",   "Rewards",   "Support", "Account"};
const std::vector<std::string> kOtherDestinations = {"Paris", "London", "Cancun", "Tokyo", "Rome", "Hawaii", "Bahamas"};
const std::vector<std::string> kSearches = {"beach resort",  "ski trip",      "cheap flights", "travel insurance",
                                            "credit card offers", "cruise deals", "car rental", "family vacation",
                                            "business travel", "hotel points"};
const std::vector<std::string> kDevices = {"mobile", "desktop", "tablet"};
const std::vector<std::string> kTiers = {"none", "silver", "gold", "platinum"};
const std::vector<std::string> kPropensities = {"hotels",   "flights", "car_rental", "cruises",
                                                "credit_card", "insurance", "dining", "retail",
                                                "streaming", "fitness", "finance", "vacation_packages"};

struct ColumnDef {
    std::string name;
    ColumnType type;
    std::string description;
};

std::vector<ColumnDef> column_defs() {
    std::vector<ColumnDef> defs = {
        {"customer_id", ColumnType::Text, "Unique customer identifier"},
        {"age", ColumnType::Number, "Age in years"},
        {"gender", ColumnType::Text, "Self-reported gender"},
        {"state", ColumnType::Text, "Two-letter postal code of the home state"},
        {"city", ColumnType::Text, "Home city"},
        {"zip", ColumnType::Text, "Five-digit ZIP code"},
        {"region", ColumnType::Text, "US census region of the home state"},
        {"loyalty_tier", ColumnType::Text, "Loyalty program tier"},
        {"income_band", ColumnType::Text, "Estimated household income band"},
        {"marital_status", ColumnType::Text, ""},
        {"occupation", ColumnType::Text, ""},
        {"language", ColumnType::Text, "Preferred language"},
        {"preferred_channel", ColumnType::Text, "Preferred marketing channel"},
        {"household_size", ColumnType::Number, ""},
        {"tenure_years", ColumnType::Number, "Years since the first purchase"},
    };
    for (const auto& p : kPropensities) {
        auto label = p;
        std::replace(label.begin(), label.end(), '_', ' ');
        defs.push_back({"propensity_" + p, ColumnType::Number, "Likelihood score 0-100 of buying " + label});
    }
    const std::vector<ColumnDef> rest = {
        {"churn_risk", ColumnType::Number, "Churn risk score 0-100"},
        {"lifetime_value", ColumnType::Number, "Lifetime spend in USD"},
        {"total_orders", ColumnType::Number, ""},
        {"avg_order_value", ColumnType::Number, "Average order value in USD"},
        {"email_open_rate", ColumnType::Number, "Share of marketing emails opened, 0-1"},
        {"points_balance", ColumnType::Number, "Unredeemed loyalty points"},
        {"points_redeemed", ColumnType::Number, ""},
        {"nights_stayed_12m", ColumnType::Number, "Hotel nights in the last 12 months"},
        {"flights_12m", ColumnType::Number, "Flights booked in the last 12 months"},
        {"cart_abandons_30d", ColumnType::Number, ""},
        {"support_tickets", ColumnType::Number, ""},
        {"nps_score", ColumnType::Number, "Latest survey score 0-10; empty when never surveyed"},
        {"pages_visited", ColumnType::TextList, "Site pages the customer visited"},
        {"web_destinations", ColumnType::TextList, "Destinations the customer browsed"},
        {"web_search", ColumnType::TextList, "On-site search terms"},
        {"device_types", ColumnType::TextList, ""},
        {"email_opt_in", ColumnType::Boolean, "Consented to marketing email"},
        {"sms_opt_in", ColumnType::Boolean, ""},
        {"has_app", ColumnType::Boolean, "Installed the mobile app"},
        {"is_member", ColumnType::Boolean, ""},
        {"has_credit_card", ColumnType::Boolean, "Holds the co-branded credit card"},
        {"home_owner", ColumnType::Boolean, ""},
        {"signup_date", ColumnType::Date, ""},
        {"last_visit", ColumnType::Date, "Date of the latest site visit"},
        {"last_purchase_date", ColumnType::Date, ""},
        {"search_date", ColumnType::Date, "Date of the latest on-site search"},
        {"last_hotel_booking", ColumnType::Date, "Empty when the customer never booked a hotel"},
        {"last_flight_booking", ColumnType::Date, "Empty when the customer never booked a flight"},
        {"last_email_open", ColumnType::Date, ""},
    };
    defs.insert(defs.end(), rest.begin(), rest.end());
    return defs;
}

double cents(double v) { return std::round(v * 100.0) / 100.0; }

TextList distinct_sample(PortableRng& rng, const std::vector<std::string>& pool, std::int64_t lo, std::int64_t hi) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(lo, hi));
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < k && i < idx.size(); ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                static_cast<std::int64_t>(idx.size()) - 1));
        std::swap(idx[i], idx[j]);
    }
    TextList out;
    for (std::size_t i = 0; i < k && i < idx.size(); ++i) out.push_back(pool[idx[i]]);
    return out;
}

CustomerTable generate_table(const GenConfig& cfg, PortableRng& rng) {
    const auto defs = column_defs();
    std::vector<CustomerTable::Column> cols;
    for (const auto& d : defs) {
        CustomerTable::Column c;
        c.meta.name = d.name;
        c.meta.ctype = d.type;
        c.meta.description = d.description;
        c.cells.reserve(cfg.rows);
        cols.push_back(std::move(c));
    }
    std::vector<std::string> destinations = kOtherDestinations;
    for (const auto& s : states()) destinations.push_back(s.name);

    const std::vector<std::string> genders = {"female", "male", "nonbinary"};
    const std::vector<std::string> incomes = {"low", "middle", "upper_middle", "high"};
    const std::vector<std::string> marital = {"single", "married", "divorced", "widowed"};
    const std::vector<std::string> jobs = {"professional", "service", "retired", "student", "self_employed", "other"};
    const std::vector<std::string> langs = {"en", "es", "fr", "zh"};
    const std::vector<std::string> channels = {"email", "sms", "push", "none"};

    auto days_ago = [&](std::int64_t max_days) {
        return cfg.today.minus_days(static_cast<int>(rng.uniform_int(0, max_days)));
    };

    for (std::size_t r = 0; r < cfg.rows; ++r) {
        std::size_t c = 0;
        auto put = [&](CellValue v) { cols[c++].cells.push_back(std::move(v)); };
        const auto& st = rng.pick(states());
        put(fmt::format("C{:06d}", r + 1));
        put(static_cast<double>(rng.uniform_int(18, 85)));
        put(rng.pick(genders));
        put(st.code);
        put(rng.pick(st.cities));
        put(fmt::format("{:05d}", st.zip_prefix * 100 % 100000 + rng.uniform_int(0, 99)));
        put(st.region);
        const double tier_draw = rng.uniform01();
        put(kTiers[tier_draw < 0.45 ? 0 : tier_draw < 0.75 ? 1 : tier_draw < 0.93 ? 2 : 3]);
        put(rng.pick(incomes));
        put(rng.pick(marital));
        put(rng.pick(jobs));
        put(rng.bernoulli(0.8) ? std::string("en") : rng.pick(langs));
        put(rng.pick(channels));
        put(static_cast<double>(rng.uniform_int(1, 6)));
        put(static_cast<double>(rng.uniform_int(0, 20)));
        for (std::size_t p = 0; p < kPropensities.size(); ++p) put(static_cast<double>(rng.uniform_int(0, 100)));
        put(static_cast<double>(rng.uniform_int(0, 100)));
        const double u = rng.uniform01();
        put(cents(u * u * 20000.0));
        const double o = rng.uniform01();
        put(std::floor(o * o * 121.0));
        put(cents(20.0 + rng.uniform01() * 480.0));
        put(cents(rng.uniform01()));
        put(static_cast<double>(rng.uniform_int(0, 50000)));
        put(static_cast<double>(rng.uniform_int(0, 20000)));
        const double n = rng.uniform01();
        put(std::floor(n * n * 31.0));
        put(static_cast<double>(rng.uniform_int(0, 20)));
        put(static_cast<double>(rng.uniform_int(0, 10)));
        put(static_cast<double>(rng.uniform_int(0, 8)));
        put(rng.bernoulli(0.2) ? CellValue{} : CellValue{static_cast<double>(rng.uniform_int(0, 10))});
        put(distinct_sample(rng, kPages, 0, 5));
        put(distinct_sample(rng, destinations, 0, 4));
        put(distinct_sample(rng, kSearches, 0, 3));
        put(distinct_sample(rng, kDevices, 1, 3));
        put(rng.bernoulli(0.6));
        put(rng.bernoulli(0.3));
        put(rng.bernoulli(0.45));
        put(rng.bernoulli(0.5));
        put(rng.bernoulli(0.2));
        put(rng.bernoulli(0.55));
        put(days_ago(3650));
        put(days_ago(729));
        put(days_ago(729));
        put(days_ago(729));
        put(rng.bernoulli(0.4) ? CellValue{} : CellValue{days_ago(729)});
        put(rng.bernoulli(0.35) ? CellValue{} : CellValue{days_ago(729)});
        put(rng.bernoulli(0.25) ? CellValue{} : CellValue{days_ago(365)});
    }
    return CustomerTable::from_columns(std::move(cols), "customer_id");
}

// --- clause construction -------------------------------------------------

const std::map<std::string, std::string>& labels() {
    static const std::map<std::string, std::string> kLabels = {
        {"age", "age"},
        {"tenure_years", "tenure in years"},
        {"total_orders", "total orders"},
        {"lifetime_value", "lifetime value"},
        {"nights_stayed_12m", "hotel nights in the last 12 months"},
        {"churn_risk", "churn risk"},
        {"household_size", "household size"},
        {"points_balance", "points balance"},
        {"signup_date", "signup date"},
        {"last_visit", "last visit"},
        {"last_purchase_date", "last purchase"},
        {"search_date", "latest search"},
        {"last_hotel_booking", "last hotel booking"},
        {"last_flight_booking", "last flight booking"},
        {"last_email_open", "last email open"},
    };
    return kLabels;
}

std::string label_of(const std::string& column) {
    if (column.starts_with("propensity_")) {
        auto l = column.substr(11);
        std::replace(l.begin(), l.end(), '_', ' ');
        return "propensity for " + l;
    }
    auto it = labels().find(column);
    return it == labels().end() ? column : it->second;
}

std::string_view op_words(dsl::CompareOp op) {
    switch (op) {
        case dsl::CompareOp::Ge: return "of at least";
        case dsl::CompareOp::Gt: return "above";
        case dsl::CompareOp::Le: return "of at most";
        case dsl::CompareOp::Lt: return "below";
        case dsl::CompareOp::Eq: return "equal to";
        case dsl::CompareOp::Ne: return "not equal to";
    }
    return "";
}

ClauseSpec number_clause(const std::string& column, dsl::CompareOp op, double value) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::NumberCompare;
    c.column = column;
    c.op = op;
    c.number = value;
    const auto label = label_of(column);
    const auto words = op_words(op);
    const auto v = text::format_number(value);
    c.phrase = fmt::format("with {} {} {}", label, words, v);
    c.rule_text = fmt::format("Every user has {} {} {}", label, words, v);
    c.step_text = fmt::format("Keep users whose {} is {} {}.", column, words.starts_with("of ") ? words.substr(3) : words, v);
    return c;
}

ClauseSpec within_clause(const std::string& column, int days) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::DateWithin;
    c.column = column;
    c.days = days;
    const auto label = label_of(column);
    c.phrase = fmt::format("whose {} is within the last {} days", label, days);
    c.rule_text = fmt::format("Every user's {} is within the last {} days", label, days);
    c.step_text = fmt::format("Keep users whose {} falls within the last {} days.", column, days);
    return c;
}

ClauseSpec date_clause(const std::string& column, dsl::CompareOp op, Date d) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::DateCompare;
    c.column = column;
    c.op = op;
    c.date = d;
    const auto label = label_of(column);
    const std::string words = op == dsl::CompareOp::Ge ? "on or after" : "before";
    c.phrase = fmt::format("whose {} is {} {}", label, words, d.to_string());
    c.rule_text = fmt::format("Every user's {} is {} {}", label, words, d.to_string());
    c.step_text = fmt::format("Keep users whose {} is {} {}.", column, words, d.to_string());
    return c;
}

ClauseSpec bool_clause(const std::string& column, bool flag) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::BoolEquals;
    c.column = column;
    c.flag = flag;
    if (column == "email_opt_in") {
        c.phrase = flag ? "who opted in to email" : "who did not opt in to email";
        c.rule_text = flag ? "Every user opted in to email" : "No user opted in to email";
    } else {
        c.phrase = flag ? "who have the mobile app" : "who do not have the mobile app";
        c.rule_text = flag ? "Every user has the mobile app" : "No user has the mobile app";
    }
    c.step_text = fmt::format("Keep users whose {} is {}.", column, flag ? "true" : "false");
    return c;
}

ClauseSpec state_clause(const StateInfo& st) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::TextEquals;
    c.column = "state";
    c.text = st.code;
    c.phrase = "who live in " + st.name;
    c.rule_text = "Every user lives in " + st.name;
    c.step_text = "Keep users whose state is " + st.code + ".";
    return c;
}

ClauseSpec destination_clause(const StateInfo& st) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::ListContains;
    c.column = "web_destinations";
    c.text = st.name;
    c.phrase = "who browsed " + st.name;
    c.rule_text = "Every user browsed " + st.name;
    c.step_text = "Keep users whose web_destinations include " + st.name + ".";
    return c;
}

ClauseSpec tier_clause(const std::string& tier) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::TextEquals;
    c.column = "loyalty_tier";
    c.text = tier;
    c.phrase = "in the " + tier + " loyalty tier";
    c.rule_text = "Every user is in the " + tier + " loyalty tier";
    c.step_text = "Keep users whose loyalty_tier is " + tier + ".";
    return c;
}

ClauseSpec page_clause(const std::string& page) {
    ClauseSpec c;
    c.kind = ClauseSpec::Kind::ListContains;
    c.column = "pages_visited";
    c.text = page;
    c.phrase = "who visited the " + page + " page";
    c.rule_text = "Every user visited the " + page + " page";
    c.step_text = "Keep users whose pages_visited includes " + page + ".";
    return c;
}

const std::vector<std::string> kDateColumns = {"last_visit",         "search_date",         "last_purchase_date",
                                               "signup_date",        "last_hotel_booking", "last_flight_booking",
                                               "last_email_open"};
const std::vector<int> kWindows = {30, 60, 90, 120, 180, 365};

ClauseSpec random_date_clause(PortableRng& rng, Date today) {
    const auto& col = rng.pick(kDateColumns);
    if (rng.bernoulli(0.75)) return within_clause(col, rng.pick(kWindows));
    const auto d = today.minus_days(static_cast<int>(rng.uniform_int(2, 24)) * 30);
    return date_clause(col, rng.bernoulli(0.7) ? dsl::CompareOp::Ge : dsl::CompareOp::Lt, d);
}

ClauseSpec random_number_clause(PortableRng& rng) {
    static const std::vector<std::pair<std::string, std::vector<double>>> kOther = {
        {"age", {25, 30, 35, 40, 50, 60, 65}},
        {"tenure_years", {1, 2, 3, 5, 10}},
        {"total_orders", {2, 5, 10, 20, 50}},
        {"lifetime_value", {500, 1000, 2500, 5000, 10000}},
        {"nights_stayed_12m", {1, 3, 5, 10}},
        {"churn_risk", {20, 50, 70, 80}},
        {"household_size", {2, 3, 4}},
        {"points_balance", {1000, 5000, 10000, 25000}},
    };
    static const std::vector<dsl::CompareOp> kOps = {dsl::CompareOp::Ge, dsl::CompareOp::Gt, dsl::CompareOp::Le,
                                                     dsl::CompareOp::Lt};
    static const std::vector<double> kPropThresholds = {30, 40, 50, 60, 70, 75, 80, 90};
    if (rng.bernoulli(0.6)) {
        const auto& p = rng.pick(kPropensities);
        const auto op = rng.bernoulli(0.8) ? rng.pick(std::vector<dsl::CompareOp>{dsl::CompareOp::Ge, dsl::CompareOp::Gt})
                                           : rng.pick(std::vector<dsl::CompareOp>{dsl::CompareOp::Le, dsl::CompareOp::Lt});
        return number_clause("propensity_" + p, op, rng.pick(kPropThresholds));
    }
    const auto& [col, values] = rng.pick(kOther);
    const auto op = rng.pick(kOps);
    const double value = rng.pick(values);
    return number_clause(col, op, value);
}

const std::vector<std::string> kOpeners = {"Find users", "Give me users", "Create an audience of users",
                                           "I want customers"};

std::string assume_today(Date today) { return "Assume today is " + today.to_string() + "."; }

std::string render_query(const std::string& opener, const std::vector<ClauseSpec>& clauses, Date today) {
    std::string q = opener;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        q += (i == 0 ? " " : " and ") + clauses[i].phrase;
    }
    return q + ". " + assume_today(today);
}

std::vector<std::string> tags_for(const std::vector<ClauseSpec>& clauses) {
    std::set<std::string> tags{"filter"};
    for (const auto& c : clauses) {
        switch (c.kind) {
            case ClauseSpec::Kind::NumberCompare: tags.insert("numeric"); break;
            case ClauseSpec::Kind::DateWithin:
            case ClauseSpec::Kind::DateCompare: tags.insert("date"); break;
            case ClauseSpec::Kind::BoolEquals: tags.insert("boolean"); break;
            case ClauseSpec::Kind::TextEquals:
            case ClauseSpec::Kind::ListContains: tags.insert("text"); break;
        }
        if (c.column == "state") tags.insert("state");
    }
    return {tags.begin(), tags.end()};
}

std::vector<SyntheticCase> generate_cases(const GenConfig& cfg, const CustomerTable& table, PortableRng& rng) {
    const std::size_t n = cfg.cases;
    const auto scaled = [n](std::size_t k) { return (k * n + 44) / 88; };
    const std::size_t n_date = scaled(53);
    const std::size_t n_num = scaled(48);
    const std::size_t all_users = (60 * n) / 88;
    const std::size_t no_users = (70 * n) / 88;
    std::set<std::size_t> bool_cases{(20 * n) / 88, (75 * n) / 88};

    std::vector<SyntheticCase> out;
    for (std::size_t i = 0; i < n; ++i) {
        SyntheticCase sc;
        std::vector<ClauseSpec> clauses;
        std::string opener = rng.pick(kOpeners);
        if (i == all_users && i != no_users) {
            clauses.push_back(number_clause("age", dsl::CompareOp::Ge, 18));
        } else if (i == no_users) {
            clauses.push_back(number_clause("propensity_cruises", dsl::CompareOp::Gt, 100));
        } else {
            if (i < n_date) clauses.push_back(random_date_clause(rng, cfg.today));
            if (i >= n - n_num) clauses.push_back(random_number_clause(rng));
            if (bool_cases.contains(i)) {
                const std::string column = rng.bernoulli(0.5) ? "email_opt_in" : "has_app";
                const bool flag = rng.bernoulli(0.7);
                clauses.push_back(bool_clause(column, flag));
            }
            if (i % 3 == 0) {
                const auto& st = rng.pick(states());
                clauses.push_back(state_clause(st));
                sc.distractors.push_back(destination_clause(st));
            }
            if (i % 4 == 1) {
                clauses.push_back(rng.bernoulli(0.5) ? tier_clause(rng.pick(std::vector<std::string>{"silver", "gold", "platinum"}))
                                                     : page_clause(rng.pick(kPages)));
            }
            if (clauses.empty()) clauses.push_back(tier_clause("gold"));
        }
        sc.bench.query_id = fmt::format("q{:03d}", i + 1);
        sc.bench.query = render_query(opener, clauses, cfg.today);
        sc.bench.today = cfg.today;
        sc.bench.gold_ids = scan_ids(table, clauses, cfg.today);
        sc.bench.tags = tags_for(clauses);
        if (i == all_users) sc.bench.tags.push_back("all_users");
        if (i == no_users) sc.bench.tags.push_back("no_users");
        sc.clauses = std::move(clauses);
        out.push_back(std::move(sc));
    }
    return out;
}

std::optional<ChallengeCase> try_challenge(const CustomerTable& table, PortableRng& rng, Date today, std::size_t idx) {
    const auto& prop = rng.pick(kPropensities);
    const std::string date_column = rng.pick(std::vector<std::string>{"search_date", "last_visit"});
    const int window = rng.pick(std::vector<int>{90, 120, 180});
    const auto fixed = within_clause(date_column, window);
    const double t3 = rng.pick(std::vector<double>{40, 45, 50, 55});
    const std::vector<double> thresholds = {t3 + 25, t3 + 10, t3};
    const auto column = "propensity_" + prop;
    std::vector<std::size_t> counts;
    for (double t : thresholds) {
        counts.push_back(scan_ids(table, {fixed, number_clause(column, dsl::CompareOp::Ge, t)}, today).size());
    }
    if (!(counts[0] < counts[1] && counts[1] < counts[2])) return std::nullopt;
    std::size_t size = counts[1] + (counts[2] - counts[1] + 1) / 2;
    size -= size % 10;
    if (size <= counts[1] || size > counts[2]) size = counts[2];

    ChallengeCase c;
    c.min_size = size;
    c.fixed = {fixed};
    c.numeric = number_clause(column, dsl::CompareOp::Ge, thresholds[0]);
    c.thresholds = thresholds;
    c.size_rule = fmt::format("The audience has at least {} users", size);
    const auto head = fmt::format("Give me at least {} users", size);
    c.bench.query_id = fmt::format("c{:03d}", idx + 1);
    c.bench.query = head + " " + c.numeric.phrase + " " + fixed.phrase + ". " + assume_today(today);
    c.relaxed_query = head + " " + fixed.phrase + ". " + assume_today(today);
    c.bench.today = today;
    c.bench.gold_ids = scan_ids(table, {fixed, number_clause(column, dsl::CompareOp::Ge, thresholds[2])}, today);
    c.bench.tags = {"challenge", "date", "numeric"};
    return c;
}

MemoryStore build_memory() {
    MemoryStore store([] { return std::string(kSyntheticClock); });
    for (const auto& st : states()) {
        store.add(MemoryKind::Semantic, "Customers who live in " + st.name + " have state " + st.code +
                                            "; web_destinations only records browsing, not where a customer lives.");
    }
    store.add(MemoryKind::Semantic, "Propensity scores are integers from 0 to 100; a higher score means the customer is "
                                    "more likely to buy.");
    store.add(MemoryKind::Semantic, "loyalty_tier values are lowercase: none, silver, gold, platinum.");
    store.add(MemoryKind::Semantic,
              "pages_visited holds page names such as Financial Services, Credit Cards and Hotels.");
    store.add(MemoryKind::Semantic, "A window such as the last 90 days includes today and the day 90 days ago.");
    store.add(MemoryKind::Episodic,
              "Issue: the audience has fewer users than requested because a propensity threshold is too strict. "
              "Potential solution: lower the threshold about 10 points at a time and drop it from the query.");
    store.add(MemoryKind::Episodic,
              "Issue: 0 users visited the Finance page. Potential solution: the page is listed as Financial Services.");
    store.add(MemoryKind::Episodic,
              "Issue: a state filter returned no users. Potential solution: state holds two-letter codes such as MA.");
    store.add(MemoryKind::Episodic,
              "Issue: a date window missed recent activity. Potential solution: anchor the window on today's date.");
    return store;
}

}  // namespace

SyntheticData generate_synthetic(const GenConfig& config, std::uint64_t seed) {
    config.validate();
    PortableRng rng(seed);
    SyntheticData data;
    data.today = config.today;
    data.table = generate_table(config, rng);
    data.cases = generate_cases(config, data.table, rng);
    for (std::size_t i = 0, attempts = 0; i < config.challenge_cases; ++attempts) {
        if (attempts > config.challenge_cases * 50) {
            throw ConfigError("could not build challenge cases; the table is too small");
        }
        if (auto c = try_challenge(data.table, rng, config.today, i)) {
            data.challenges.push_back(std::move(*c));
            ++i;
        }
    }
    data.memory = build_memory();
    return data;
}

// --- scripted transcripts -------------------------------------------------

namespace {

class TranscriptBuilder {
public:
    void add(llm::AgentTag tag, std::string response) {
        entries_.push_back({tag, next_[tag]++, {}, std::move(response)});
    }
    std::vector<llm::TranscriptEntry> take() { return std::move(entries_); }

private:
    std::vector<llm::TranscriptEntry> entries_;
    std::map<llm::AgentTag, std::size_t> next_;
};

std::string plan_reply(const std::vector<std::string>& steps) {
    std::string out = fmt::format("Thought: the request breaks into {} filter{}.\n\nPlan:", steps.size(),
                                  steps.size() == 1 ? "" : "s");
    for (std::size_t i = 0; i < steps.size(); ++i) out += fmt::format("\n{}. {}", i + 1, steps[i]);
    return out;
}

std::string rules_reply(const std::vector<std::string>& rules, Date today) {
    std::string out;
    std::size_t i = 0;
    for (const auto& r : rules) out += fmt::format("{}. {}.\n", ++i, r);
    out += fmt::format("{}. {}", ++i, assume_today(today));
    return out;
}

void add_verification(TranscriptBuilder& b, const std::vector<std::pair<std::string, std::string>>& rules, Date today,
                      std::set<std::string>& compiled) {
    std::vector<std::string> texts;
    for (const auto& r : rules) texts.push_back(r.first);
    b.add(llm::AgentTag::VerifierExtract, rules_reply(texts, today));
    for (const auto& [rule, check] : rules) {
        if (compiled.insert(rule).second) b.add(llm::AgentTag::VerifierCompile, check);
    }
}

}  // namespace

std::vector<llm::TranscriptEntry> scripted_transcript(const SyntheticCase& c, ScriptStyle style) {
    TranscriptBuilder b;
    std::vector<ClauseSpec> steps;
    for (const auto& clause : c.clauses) {
        steps.push_back(clause);
        if (style == ScriptStyle::NoMemory && clause.column == "state") {
            for (const auto& d : c.distractors) steps.push_back(d);
        }
    }
    if (style == ScriptStyle::NoPlanner) {
        std::string expr;
        for (const auto& s : steps) expr += (expr.empty() ? "" : " and ") + (steps.size() > 1 ? "(" + s.dsl() + ")" : s.dsl());
        b.add(llm::AgentTag::Actor, expr);
    } else {
        std::vector<std::string> texts;
        for (const auto& s : steps) texts.push_back(s.step_text);
        b.add(llm::AgentTag::Planner, plan_reply(texts));
        for (const auto& s : steps) b.add(llm::AgentTag::Actor, s.dsl());
    }
    std::vector<std::pair<std::string, std::string>> rules;
    for (const auto& clause : c.clauses) rules.emplace_back(clause.rule_text, "all_rows(" + clause.dsl() + ")");
    std::set<std::string> compiled;
    add_verification(b, rules, c.bench.today, compiled);
    return b.take();
}

std::vector<llm::TranscriptEntry> challenge_transcript(const ChallengeCase& c) {
    TranscriptBuilder b;
    std::set<std::string> compiled;
    const auto numeric_at = [&](double t) { return number_clause(c.numeric.column, dsl::CompareOp::Ge, t); };
    const auto size_check = fmt::format("row_count >= {}", c.min_size);

    for (std::size_t it = 0; it < c.thresholds.size(); ++it) {
        std::vector<ClauseSpec> steps = c.fixed;
        steps.push_back(numeric_at(c.thresholds[it]));
        std::vector<std::string> texts;
        for (const auto& s : steps) texts.push_back(s.step_text);
        b.add(llm::AgentTag::Planner, plan_reply(texts));
        for (const auto& s : steps) b.add(llm::AgentTag::Actor, s.dsl());

        if (it == 0) {
            std::vector<std::pair<std::string, std::string>> rules{{c.size_rule, size_check}};
            for (const auto& f : c.fixed) rules.emplace_back(f.rule_text, "all_rows(" + f.dsl() + ")");
            rules.emplace_back(c.numeric.rule_text, "all_rows(" + c.numeric.dsl() + ")");
            add_verification(b, rules, c.bench.today, compiled);
        }
        if (it + 1 == c.thresholds.size()) break;

        const auto label = label_of(c.numeric.column);
        const auto from = text::format_number(c.thresholds[it]);
        const auto to = text::format_number(c.thresholds[it + 1]);
        b.add(llm::AgentTag::Reflector,
              fmt::format("Suggested changes to the plan:\n"
                          "1. Consider lowering the {} threshold from {} to {} so the audience reaches {} users.\n\n"
                          "Updated user query: {}\n\n"
                          "Distilled insights:\n"
                          "1. When the audience is smaller than the requested size, lower the strictest {} "
                          "threshold in steps of about 10 points instead of dropping other filters.",
                          label, from, to, c.min_size, c.relaxed_query, label));
        if (it == 0) {
            // Extraction for the relaxed query, requested by the drop-only check.
            std::vector<std::string> texts{c.size_rule};
            for (const auto& f : c.fixed) texts.push_back(f.rule_text);
            b.add(llm::AgentTag::VerifierExtract, rules_reply(texts, c.bench.today));
        }
    }
    return b.take();
}

std::vector<BenchmarkCase> benchmark_cases(const std::vector<SyntheticCase>& cases) {
    std::vector<BenchmarkCase> out;
    for (const auto& c : cases) out.push_back(c.bench);
    return out;
}

std::vector<BenchmarkCase> benchmark_cases(const std::vector<ChallengeCase>& cases) {
    std::vector<BenchmarkCase> out;
    for (const auto& c : cases) out.push_back(c.bench);
    return out;
}

}  // namespace ramp
