#!/usr/bin/env python3
"""Regenerates the committed test fixtures. Run from any directory:

    python3 tests/fixtures/generate.py

Images are written with Pillow and read back to check their sizes.
"""
import pathlib
import shutil

from PIL import Image

HERE = pathlib.Path(__file__).resolve().parent


def image(path, size, fmt, color=(40, 90, 160)):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.new("RGB", size, color).save(path, fmt)
    with Image.open(path) as im:
        assert im.size == size, (path, im.size)


def text(path, body):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(body)


def images():
    out = HERE / "images"
    image(out / "640x480.png", (640, 480), "PNG")
    # Smallest legal GIF: 1x1, global color table of 2, one LZW-coded pixel.
    gif = bytes.fromhex(
        "474946383961" "01000100" "800000" "000000" "ffffff"
        "2c00000000010001000002024401003b")
    (out / "1x1.gif").write_bytes(gif)
    with Image.open(out / "1x1.gif") as im:
        assert im.size == (1, 1)
    (out / "garbage.gif").write_bytes(b"GIF")


CROPPER = """/* Cropper helpers shared by every release in this fixture. */
function initCropper(el, opts) {
  /* c */
  return { el: el, opts: opts };
}
function cropperResize(c, w, h) {
  c.w = w;
  c.h = h;
}
function cropperDestroy(c) {
  c.el = null;
}
"""

WP_STYLE = """#wp-members {{ color: #1982D1 }}
#site-title {{ margin-top: {margin}px }}
.entry-title a:hover {{ color: #1b8be0 }}
"""


def wordpress():
    for version, margin in (("4.6.1", 1), ("4.7.0", 2), ("4.7.5", 3)):
        root = HERE / "cms" / f"wordpress-{version}"
        text(root / "wp-login.php", "<?php // login\n")
        text(root / "wp-includes/js/crop/cropper.js", CROPPER)
        image(root / "wp-includes/images/w-logo-blue.png", (80, 80), "PNG")
        text(root / "wp-content/themes/twentyeleven/style.css", WP_STYLE.format(margin=margin))
        text(root / "readme.html", f"<html><body>WordPress {version}</body></html>\n")


def typo3():
    for version in ("4.7.5", "4.7.6", "6.2.0"):
        root = HERE / "cms" / f"typo3-{version}"
        text(root / "index.php", "<?php // TYPO3\n")
        image(root / "typo3/gfx/typo3logo.gif", (123, 34), "GIF")
        if version != "6.2.0":
            image(root / "typo3/sysext/t3skin/images/btn-sprite.gif", (16, 256), "GIF")
            text(root / "typo3/sysext/t3skin/stylesheets/structure.css", "#typo3-docheader { height: 26px }\n")
        else:
            text(root / "typo3/sysext/backend/Resources/Public/Css/backend.css", "#typo3-docheader { height: 40px }\n")
            text(root / "typo3/sysext/backend/Resources/Public/JavaScript/backend.js", "var TYPO3_BACKEND = true;\n")
        if version == "4.7.6":
            text(root / "typo3/js/extjs/ux/SearchField.js",
                 "var SearchField = function (config) { this.config = config; };\n")


def three_services():
    base = HERE / "three"
    router_files = {
        "index.html": "<html><head><link rel=stylesheet href=style.css></head><body><img src=logo.png></body></html>\n",
        "style.css": "#header { color: #336699 }\n",
    }
    install = base / "router-1.0.2"
    for name, body in router_files.items():
        text(install / name, body)
    text(install / "app.js", "var FW_VERSION = '1.0.2';\n")
    image(install / "logo.png", (120, 40), "PNG")

    rootfs = base / "router-1.1.0-rootfs"
    text(rootfs / "etc/hostname", "router\n")
    text(rootfs / "bin/README", "binaries elided\n")
    www = rootfs / "www"
    for name, body in router_files.items():
        text(www / name, body)
    text(www / "style.css", "#header { color: #336699 }\n#nav { margin-top: 4px }\n")
    text(www / "app.js", "var FW_VERSION = '1.1.0';\n")
    image(www / "logo.png", (120, 40), "PNG")

    site = base / "camera-2.3-site"
    text(site / "index.html",
         "<html><head><link rel=\"stylesheet\" href=\"style.css\">"
         "<script src=\"js/viewer.js\"></script></head>"
         "<body><img src=\"logo.png\"><a href=\"help.html\">help</a></body></html>\n")
    text(site / "help.html", "<html><body><img src=\"img/help-icon.gif\"></body></html>\n")
    text(site / "style.css", ".viewer { width: 640px }\n")
    text(site / "js/viewer.js", "function startViewer(el) {\n  return el;\n}\nvar CAM_MODEL = 'VC-2';\n")
    image(site / "logo.png", (200, 60), "PNG")
    image(site / "img/help-icon.gif", (24, 24), "GIF")


def main():
    for sub in ("images", "cms", "three"):
        shutil.rmtree(HERE / sub, ignore_errors=True)
    images()
    wordpress()
    typo3()
    three_services()


if __name__ == "__main__":
    main()
