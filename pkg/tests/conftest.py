from belltasks import graphs, tasks


def make_game(name, kind="rendezvous", start="any", r=2, h=1, symmetric=False):
    g = graphs.catalog_lookup(name).graph
    spec = tasks.TaskSpec(kind=kind, r=r, h=h, start=start,
                          symmetric_only=symmetric)
    return tasks.build_game(g, spec)
