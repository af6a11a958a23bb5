#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bpn/net.hpp"
#include "bpn/reduction.hpp"
#include "bpn/separation.hpp"
#include "bpn/ts_io.hpp"
#include "bpn/witness_io.hpp"

namespace
{

enum exit_code
{
    holds = 0,
    fails = 1,
    usage = 2,
    inconclusive = 3,
    internal = 4,
};

struct options
{
    std::string type;
    std::string engine;
    double budget = 0;
    std::string witness;
    std::string output;
};

// A TS file with one block is a system; several blocks form a union. Member
// states are prefixed "<index>:" only when their names collide.
struct subject
{
    bpn::transition_system ts;
    std::optional<bpn::ts_union> u;
};

subject load_subject( const std::string& path )
{
    std::vector<bpn::transition_system> members;
    for ( const auto& spec : bpn::parse_ts_blocks( bpn::text::read_file( path ) ) )
    {
        try
        {
            members.push_back( bpn::transition_system::from_spec( spec ) );
        }
        catch ( const bpn::invalid_input& e )
        {
            throw bpn::parse_error( e.what() );
        }
    }
    if ( members.empty() )
        throw bpn::parse_error( path + ": no transition system" );
    for ( const auto& m : members )
    {
        auto report = bpn::validate_ts( m );
        if ( !report.ok() )
            std::cerr << "warning: " << m.name() << ": " << report.issues.size() << " validation issue(s)\n"
                      << report.to_string();
    }
    if ( members.size() == 1 )
        return { members.front(), std::nullopt };
    std::set<std::string> names;
    bool clash = false;
    for ( const auto& m : members )
        for ( const auto& s : m.states() )
            clash = clash || !names.insert( s ).second;
    auto u = clash ? bpn::ts_union::namespaced( members ) : bpn::ts_union( members );
    return { u.flat(), u };
}

bpn::net_type require_type( const options& o )
{
    if ( o.type.empty() )
        throw CLI::ValidationError( "--type", "a net type is required, e.g. --type nop,set,swap,free" );
    auto t = bpn::parse_net_type( o.type );
    bpn::require_nonempty( t );
    return t;
}

bpn::engine_config make_config( const options& o, const bpn::transition_system& ts )
{
    bpn::engine_config cfg;
    if ( o.engine.empty() )
        cfg.kind = ts.num_states() > 16 ? bpn::engine_kind::propositional : bpn::engine_kind::exhaustive;
    else
        cfg.kind = o.engine == "sat" ? bpn::engine_kind::propositional : bpn::engine_kind::exhaustive;
    if ( o.budget > 0 )
        cfg.budget_seconds = o.budget;
    return cfg;
}

bpn::separation_atom parse_atom( const bpn::transition_system& ts, const std::string& text )
{
    std::istringstream in( text );
    std::vector<std::string> t;
    for ( std::string tok; in >> tok; )
        t.push_back( tok );
    auto state = [&]( const std::string& n ) {
        auto s = ts.find_state( n );
        if ( !s )
            throw bpn::parse_error( "--atom: unknown state '" + n + "'" );
        return *s;
    };
    if ( t.size() == 3 && t[0] == "sp" )
        return bpn::state_pair{ state( t[1] ), state( t[2] ) };
    if ( t.size() == 3 && t[0] == "essp" )
    {
        auto e = ts.find_event( t[1] );
        if ( !e )
            throw bpn::parse_error( "--atom: unknown event '" + t[1] + "'" );
        return bpn::event_state{ *e, state( t[2] ) };
    }
    throw bpn::parse_error( "--atom expects 'sp <s> <s'>' or 'essp <e> <s>'" );
}

void emit( const options& o, const std::string& content )
{
    if ( o.output.empty() || o.output == "-" )
        std::cout << content;
    else
        bpn::text::write_file( o.output, content );
}

int cmd_check( const options& o, const std::string& property, const std::string& file, const std::string& atom_text )
{
    const auto type = require_type( o );
    const auto subj = load_subject( file );
    const auto& ts = subj.ts;
    const auto cfg = make_config( o, ts );

    std::vector<std::vector<bpn::separation_atom>> batches;
    if ( property == "atom" )
    {
        if ( atom_text.empty() )
            throw CLI::ValidationError( "--atom", "property 'atom' needs --atom" );
        batches.push_back( { parse_atom( ts, atom_text ) } );
        bpn::require_well_formed( ts, batches.back().front() );
    }
    else
    {
        if ( property != "essp" )
            batches.push_back( subj.u ? bpn::ssp_atoms( *subj.u ) : bpn::ssp_atoms( ts ) );
        if ( property != "ssp" )
            batches.push_back( subj.u ? bpn::essp_atoms( *subj.u ) : bpn::essp_atoms( ts ) );
    }

    bpn::separation_checker checker( ts, type, cfg );
    for ( const auto& b : batches )
        if ( !checker.add( b ) )
            break;
    const auto& r = checker.result();

    std::cout << property << ": " << bpn::name_of( r.decision ) << "\n";
    std::cout << "regions: " << r.regions.size() << "\n";
    if ( r.counterexample )
        std::cout << "counterexample: " << bpn::describe( ts, *r.counterexample ) << "\n";
    if ( !r.unresolved.empty() )
        std::cout << "unresolved: " << r.unresolved.size() << " atom(s), first " << bpn::describe( ts, r.unresolved.front() )
                  << "\n";
    if ( !o.witness.empty() )
    {
        std::string out;
        for ( const auto& b : batches )
            out += bpn::write_witnesses( ts, r, b );
        bpn::text::write_file( o.witness, out );
    }
    switch ( r.decision )
    {
    case bpn::verdict::yes:
        return holds;
    case bpn::verdict::no:
        return fails;
    default:
        return inconclusive;
    }
}

int cmd_synth( const options& o, const std::string& file )
{
    const auto type = require_type( o );
    const auto subj = load_subject( file );
    if ( subj.u )
        throw CLI::ValidationError( "synth", "synthesis needs a single transition system, not a union" );
    const auto& ts = subj.ts;
    const auto r = bpn::check_feasibility( ts, type, make_config( o, ts ) );
    if ( r.decision == bpn::verdict::no )
    {
        std::cout << "infeasible: " << bpn::describe( ts, *r.counterexample ) << "\n";
        return fails;
    }
    if ( r.decision == bpn::verdict::inconclusive )
    {
        std::cout << "inconclusive: " << r.unresolved.size() << " atom(s) unresolved\n";
        return inconclusive;
    }
    const auto net = bpn::synthesize( ts, type, r.regions );
    const auto rg = bpn::reachability_graph( net );
    if ( !ts.is_deterministic() || !bpn::is_isomorphic( rg, ts ) )
    {
        std::cerr << "error: reachability graph of the synthesized net (" << rg.num_states()
                  << " states) is not isomorphic to the input (" << ts.num_states() << " states)\n";
        return internal;
    }
    emit( o, bpn::write_net( net ) );
    std::cerr << "synthesized " << net.places.size() << " place(s), " << net.transitions.size() << " transition(s)\n";
    return holds;
}

int cmd_rg( const options& o, const std::string& file )
{
    emit( o, bpn::write_ts( bpn::reachability_graph( bpn::read_net_file( file ) ) ) );
    return holds;
}

int cmd_iso( const std::string& a, const std::string& b )
{
    const auto x = bpn::read_ts_file( a );
    const auto y = bpn::read_ts_file( b );
    if ( !x.is_deterministic() || !y.is_deterministic() )
        throw bpn::parse_error( "isomorphism check needs deterministic systems" );
    auto map = bpn::is_isomorphic( x, y );
    if ( !map )
    {
        std::cout << "not isomorphic\n";
        return fails;
    }
    std::cout << "isomorphic\n";
    for ( bpn::state_id s = 0; s < x.num_states(); ++s )
        std::cout << x.state_name( s ) << " -> " << y.state_name( ( *map )[s] ) << "\n";
    return holds;
}

int cmd_reduce( const options& o, const std::string& file, int sigma, bool as_union )
{
    const auto f = bpn::read_cnf_file( file );
    const auto cls = sigma == 1 ? bpn::sigma_class::sigma1 : bpn::sigma_class::sigma2;
    if ( as_union )
        emit( o, bpn::write_union_instance( bpn::build_union( f, cls ) ) );
    else
        emit( o, bpn::write_instance( bpn::build_instance( f, cls ) ) );
    return holds;
}

int cmd_solve13( const std::string& file )
{
    const auto f = bpn::read_cnf_file( file );
    auto model = bpn::brute_force_one_in_three( f );
    if ( !model )
    {
        std::cout << "UNSAT\n";
        return fails;
    }
    std::string line;
    for ( const auto& x : *model )
        line += ( line.empty() ? "" : " " ) + x;
    std::cout << line << "\n";
    return holds;
}

int cmd_extract( const std::string& witness_file, const std::string& instance_file )
{
    const auto inst = bpn::read_instance_file( instance_file );
    const auto ts = inst.subject();
    const auto records = bpn::parse_witnesses( ts, bpn::text::read_file( witness_file ) );
    const auto k = ts.event( inst.roles.k );
    const auto h = ts.state( inst.roles.h02 );
    const bpn::witness_record* chosen = nullptr;
    for ( const auto& rec : records )
        if ( rec.atom && *rec.atom == bpn::separation_atom{ bpn::event_state{ k, h } } )
        {
            chosen = &rec;
            break;
        }
    for ( const auto& rec : records )
        if ( !chosen && bpn::inhibits( rec.r, k, h ) )
            chosen = &rec;
    if ( !chosen )
    {
        std::cerr << "error: no witness region inhibits " << inst.roles.k << " at " << inst.roles.h02 << "\n";
        return usage;
    }
    const auto rep = bpn::verify_condition13( ts, chosen->r, inst.roles );
    if ( !rep.precondition )
    {
        std::cerr << "error: " << rep.precondition_detail << "\n";
        return usage;
    }
    if ( !rep.ok() )
    {
        std::cerr << "falsification: region at line " << chosen->line << " violates the forced signatures\n";
        for ( const auto& v : rep.violations )
            std::cerr << "  " << v << "\n";
        return internal;
    }
    try
    {
        const auto model = bpn::extract_model( ts, chosen->r, inst.roles );
        std::string line;
        for ( const auto& x : model )
            line += ( line.empty() ? "" : " " ) + x;
        std::cout << line << "\n";
        return holds;
    }
    catch ( const bpn::falsification_error& e )
    {
        std::cerr << "falsification: " << e.what() << "\n";
        return internal;
    }
}

int run( int argc, char** argv )
{
    CLI::App app{ "Boolean Petri net synthesis: separation checks, synthesis, and hardness instances" };
    app.require_subcommand( 1 );
    app.fallthrough();
    options o;
    app.add_option( "--type", o.type, "net type, comma-separated interactions (nop,inp,out,set,res,swap,used,free)" );
    app.add_option( "--engine", o.engine, "region engine; default: sat above 16 states, else exhaustive" )
            ->check( CLI::IsMember( { "exhaustive", "sat" } ) );
    app.add_option( "--budget", o.budget, "time budget in seconds (0: unbounded)" )->check( CLI::NonNegativeNumber );
    app.add_option( "--witness", o.witness, "write witness regions to this file" );
    app.add_option( "-o,--output", o.output, "output file (default: stdout)" );

    std::string property, file, file2, atom_text;
    int sigma = 1;
    bool as_union = false;

    auto* check = app.add_subcommand( "check", "decide ssp, essp, feasibility (or one atom) of a TS or union file" );
    check->add_option( "property", property )->required()->check( CLI::IsMember( { "ssp", "essp", "feasible", "atom" } ) );
    check->add_option( "ts", file )->required();
    check->add_option( "--atom", atom_text, "with property 'atom': \"sp <s> <s'>\" or \"essp <e> <s>\"" );

    auto* synth = app.add_subcommand( "synth", "synthesize a net and verify its reachability graph" );
    synth->add_option( "ts", file )->required();

    auto* rg = app.add_subcommand( "rg", "reachability graph of a net file" );
    rg->add_option( "net", file )->required();

    auto* iso = app.add_subcommand( "iso", "exit 0 iff the two TS files are isomorphic" );
    iso->add_option( "a", file )->required();
    iso->add_option( "b", file2 )->required();

    auto* reduce = app.add_subcommand( "reduce", "build the hardness instance for a cubic monotone CNF" );
    reduce->add_option( "cnf", file )->required();
    reduce->add_option( "--sigma", sigma, "gadget family, 1 or 2" )->check( CLI::IsMember( { 1, 2 } ) );
    reduce->add_flag( "--union", as_union, "write the gadget union instead of the joined TS" );

    auto* solve13 = app.add_subcommand( "solve13", "brute-force one-in-three model" );
    solve13->add_option( "cnf", file )->required();

    auto* extract = app.add_subcommand( "extract", "recover a model from a witness region of an instance" );
    extract->add_option( "witness", file )->required();
    extract->add_option( "instance", file2 )->required();

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::CallForHelp& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e );
        return usage;
    }

    try
    {
        if ( *check )
            return cmd_check( o, property, file, atom_text );
        if ( *synth )
            return cmd_synth( o, file );
        if ( *rg )
            return cmd_rg( o, file );
        if ( *iso )
            return cmd_iso( file, file2 );
        if ( *reduce )
            return cmd_reduce( o, file, sigma, as_union );
        if ( *solve13 )
            return cmd_solve13( file );
        if ( *extract )
            return cmd_extract( file, file2 );
    }
    catch ( const CLI::Error& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    catch ( const bpn::parse_error& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    catch ( const bpn::invalid_input& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    catch ( const bpn::domain_mismatch& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    catch ( const std::exception& e )
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
    return usage;
}

} // namespace

int main( int argc, char** argv )
{
    return run( argc, argv );
}
