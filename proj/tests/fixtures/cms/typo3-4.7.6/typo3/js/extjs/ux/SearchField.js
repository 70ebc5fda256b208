var SearchField = function (config) { this.config = config; };
