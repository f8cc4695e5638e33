"""Standalone SVG maps of formed relay paths."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .topology import Instance, Role

#: Pair colors; the first three match the usual red/green/blue convention,
#: later pairs cycle through the rest.
PALETTE = ("red", "green", "blue", "orange", "purple", "brown", "magenta", "teal", "olive", "navy")

CANVAS = 600.0
MARGIN = 30.0
GLYPH = 6.0


def pair_color(pair: int) -> str:
    return PALETTE[pair % len(PALETTE)]


def render_svg(instance: Instance, paths, title: str | None = None) -> str:
    """SVG document for ``instance`` with one edge group per pair path.

    ``paths`` holds one node-index sequence per pair. Sources are filled
    circles and destinations filled squares in the pair's color, relays are
    black circles. LOS edges are solid, NLOS edges dashed.
    """
    width, height = instance.area
    scale = CANVAS / max(width, height)
    w_px, h_px = width * scale + 2 * MARGIN, height * scale + 2 * MARGIN

    def xy(node: int) -> tuple[str, str]:
        x, y = instance.positions[node]
        return f"{MARGIN + x * scale:.2f}", f"{MARGIN + (height - y) * scale:.2f}"

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=f"{w_px:.0f}",
        height=f"{h_px:.0f}",
        viewBox=f"0 0 {w_px:.2f} {h_px:.2f}",
    )
    if title:
        ET.SubElement(svg, "title").text = title
    ET.SubElement(
        svg,
        "rect",
        {"class": "area", "x": f"{MARGIN}", "y": f"{MARGIN}", "width": f"{width * scale:.2f}",
         "height": f"{height * scale:.2f}", "fill": "white", "stroke": "gray"},
    )

    for pair, nodes in enumerate(paths):
        group = ET.SubElement(svg, "g", {"class": "path", "data-pair": str(pair), "stroke": pair_color(pair),
                                         "stroke-width": "2", "fill": "none"})
        for a, b in zip(nodes, nodes[1:]):
            (x1, y1), (x2, y2) = xy(a), xy(b)
            attrs = {"x1": x1, "y1": y1, "x2": x2, "y2": y2}
            if instance.is_los(a, b):
                attrs["class"] = "los"
            else:
                attrs["class"] = "nlos"
                attrs["stroke-dasharray"] = "6,4"
            ET.SubElement(group, "line", attrs)

    nodes_group = ET.SubElement(svg, "g", {"class": "nodes"})
    for node in instance.nodes:
        cx, cy = xy(node.index)
        if node.role is Role.RELAY:
            ET.SubElement(nodes_group, "circle", {"class": "relay", "cx": cx, "cy": cy, "r": f"{GLYPH}",
                                                  "fill": "black"})
        elif node.role is Role.SOURCE:
            ET.SubElement(nodes_group, "circle", {"class": "source", "cx": cx, "cy": cy, "r": f"{GLYPH}",
                                                  "fill": pair_color(node.pair)})
        else:
            ET.SubElement(nodes_group, "rect", {"class": "destination", "x": f"{float(cx) - GLYPH:.2f}",
                                                "y": f"{float(cy) - GLYPH:.2f}", "width": f"{2 * GLYPH}",
                                                "height": f"{2 * GLYPH}", "fill": pair_color(node.pair)})
    return ET.tostring(svg, encoding="unicode", xml_declaration=True)
