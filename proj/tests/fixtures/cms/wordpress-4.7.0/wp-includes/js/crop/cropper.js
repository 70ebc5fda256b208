/* Cropper helpers shared by every release in this fixture. */
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
