def register_commands(app):
    from modules.spectral.commands import spectrum
    from modules.dist_signal.commands import bounds
    from modules.gnn.commands import analyze, train
    from modules.graph_core.commands import gen_sbm

    app.add_command(spectrum)
    app.add_command(bounds)
    app.add_command(train)
    app.add_command(analyze)
    app.add_command(gen_sbm)
