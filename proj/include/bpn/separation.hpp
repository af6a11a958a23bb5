#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bpn/engine.hpp"
#include "bpn/region.hpp"
#include "bpn/union.hpp"

namespace bpn
{

enum class verdict
{
    yes,
    no,
    inconclusive,
};

inline std::string_view name_of( verdict v )
{
    switch ( v )
    {
    case verdict::yes:
        return "yes";
    case verdict::no:
        return "no";
    default:
        return "inconclusive";
    }
}

// Pairs (i, j) with i < j in lexicographic order.
inline std::vector<separation_atom> ssp_atoms( const transition_system& ts )
{
    std::vector<separation_atom> out;
    for ( state_id s = 0; s < ts.num_states(); ++s )
        for ( state_id t = s + 1; t < ts.num_states(); ++t )
            out.emplace_back( state_pair{ s, t } );
    return out;
}

// Only pairs within one member are required to be separated in a union.
inline std::vector<separation_atom> ssp_atoms( const ts_union& u )
{
    std::vector<separation_atom> out;
    const auto& flat = u.flat();
    for ( state_id s = 0; s < flat.num_states(); ++s )
        for ( state_id t = s + 1; t < flat.num_states(); ++t )
            if ( u.member_of( s ) == u.member_of( t ) )
                out.emplace_back( state_pair{ s, t } );
    return out;
}

// State-major, then event.
inline std::vector<separation_atom> essp_atoms( const transition_system& ts )
{
    std::vector<separation_atom> out;
    for ( state_id s = 0; s < ts.num_states(); ++s )
        for ( event_id e = 0; e < ts.num_events(); ++e )
            if ( !ts.occurs( e, s ) )
                out.emplace_back( event_state{ e, s } );
    return out;
}

inline std::vector<separation_atom> essp_atoms( const ts_union& u )
{
    return essp_atoms( u.flat() );
}

struct separation_result
{
    verdict decision = verdict::yes;
    std::vector<region> regions;                      // distinct, in discovery order
    std::optional<separation_atom> counterexample;    // set when decision is no
    std::vector<separation_atom> unresolved;          // atoms that ran out of budget
    std::size_t atoms = 0;
    std::size_t solver_calls = 0;

    [[nodiscard]] bool holds() const { return decision == verdict::yes; }

    // The first region in discovery order solving the atom.
    [[nodiscard]] std::optional<std::size_t> witness_index( const separation_atom& atom ) const
    {
        for ( std::size_t k = 0; k < regions.size(); ++k )
            if ( solves( regions[k], atom ) )
                return k;
        return std::nullopt;
    }
};

// Decides a list of atoms with a shared engine. Regions found earlier are
// tried before the engine is asked again (when reuse is on). The first
// unsolvable atom ends the search; atoms left undecided by the budget make the
// verdict inconclusive unless some atom is unsolvable.
class separation_checker
{
    const transition_system* _ts;
    net_type _type;
    engine_config _cfg;
    deadline_t _deadline;
    std::unique_ptr<exhaustive_engine> _exhaustive;
    std::unique_ptr<propositional_engine> _propositional;

    // Coverage by the regions found so far: a state class per state (states in
    // one class are not separated yet) and an inhibition bit per (event, state).
    std::vector<std::size_t> _class;
    std::size_t _classes = 1;
    std::vector<std::vector<bool>> _inhibited;
    std::map<std::pair<std::vector<bool>, std::vector<interaction>>, std::size_t> _known;

    separation_result _result;

    void absorb( region r )
    {
        auto key = std::make_pair( r.support, r.signature );
        if ( _known.contains( key ) )
            return;
        _known.emplace( std::move( key ), _result.regions.size() );
        std::map<std::pair<std::size_t, bool>, std::size_t> split;
        for ( state_id s = 0; s < _ts->num_states(); ++s )
        {
            auto [it, fresh] = split.emplace( std::make_pair( _class[s], static_cast<bool>( r.support[s] ) ), split.size() );
            _class[s] = it->second;
        }
        _classes = split.size();
        for ( event_id e = 0; e < _ts->num_events(); ++e )
            for ( state_id s = 0; s < _ts->num_states(); ++s )
                if ( !defined_at( r.signature[e], r.support[s] ) )
                    _inhibited[e][s] = true;
        _result.regions.push_back( std::move( r ) );
    }

    [[nodiscard]] bool covered( const separation_atom& atom ) const
    {
        if ( const auto* p = std::get_if<state_pair>( &atom ) )
            return _class[p->first] != _class[p->second];
        const auto& es = std::get<event_state>( atom );
        return _inhibited[es.event][es.state];
    }

    atom_result run( const separation_atom& atom )
    {
        ++_result.solver_calls;
        if ( _cfg.kind == engine_kind::exhaustive )
        {
            if ( !_exhaustive )
                _exhaustive = std::make_unique<exhaustive_engine>( *_ts, _type, _cfg.exhaustive_state_limit );
            return _exhaustive->solve( atom, _deadline );
        }
        if ( !_propositional || !_cfg.reuse_witnesses )
            _propositional = std::make_unique<propositional_engine>( *_ts, _type );
        return _propositional->solve( atom, _deadline, _cfg.conflict_budget );
    }

public:
    separation_checker( const transition_system& ts, net_type type, engine_config cfg = {} )
            : _ts{ &ts }, _type{ type }, _cfg{ cfg }, _deadline{ make_deadline( cfg ) }, _class( ts.num_states(), 0 ),
              _inhibited( ts.num_events(), std::vector<bool>( ts.num_states(), false ) )
    {
        require_nonempty( type );
    }

    // Returns false once some atom is known unsolvable.
    bool add( const std::vector<separation_atom>& atoms )
    {
        if ( _result.decision == verdict::no )
            return false;
        for ( const auto& atom : atoms )
        {
            ++_result.atoms;
            require_well_formed( *_ts, atom );
            if ( _cfg.reuse_witnesses && covered( atom ) )
                continue;
            auto r = run( atom );
            if ( r.status == atom_status::found )
                absorb( std::move( *r.witness ) );
            else if ( r.status == atom_status::absent )
            {
                _result.decision = verdict::no;
                _result.counterexample = atom;
                return false;
            }
            else
            {
                _result.unresolved.push_back( atom );
                _result.decision = verdict::inconclusive;
            }
        }
        return true;
    }

    [[nodiscard]] const separation_result& result() const { return _result; }
    separation_result take() { return std::move( _result ); }
};

inline separation_result check_atoms( const transition_system& ts, net_type type, const std::vector<separation_atom>& atoms,
                                      const engine_config& cfg = {} )
{
    separation_checker checker( ts, type, cfg );
    checker.add( atoms );
    return checker.take();
}

inline separation_result check_ssp( const transition_system& ts, net_type type, const engine_config& cfg = {} )
{
    return check_atoms( ts, type, ssp_atoms( ts ), cfg );
}

inline separation_result check_essp( const transition_system& ts, net_type type, const engine_config& cfg = {} )
{
    return check_atoms( ts, type, essp_atoms( ts ), cfg );
}

inline separation_result check_feasibility( const transition_system& ts, net_type type, const engine_config& cfg = {} )
{
    separation_checker checker( ts, type, cfg );
    if ( checker.add( ssp_atoms( ts ) ) )
        checker.add( essp_atoms( ts ) );
    return checker.take();
}

// Regions of a union are regions of its flattened system.
inline separation_result check_ssp( const ts_union& u, net_type type, const engine_config& cfg = {} )
{
    return check_atoms( u.flat(), type, ssp_atoms( u ), cfg );
}

inline separation_result check_essp( const ts_union& u, net_type type, const engine_config& cfg = {} )
{
    return check_atoms( u.flat(), type, essp_atoms( u ), cfg );
}

inline separation_result check_feasibility( const ts_union& u, net_type type, const engine_config& cfg = {} )
{
    separation_checker checker( u.flat(), type, cfg );
    if ( checker.add( ssp_atoms( u ) ) )
        checker.add( essp_atoms( u ) );
    return checker.take();
}

} // namespace bpn
